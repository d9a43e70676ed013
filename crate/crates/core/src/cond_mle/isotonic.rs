//! Weighted isotonic regression on a chain whose last element is also below
//! a set of free objects.
//!
//! For Binomial kernels, as for any Bregman loss, the order-restricted
//! optimum is the weighted least-squares isotonic fit of the per-object
//! proportions, so blocks always take weighted means.

use crate::scalar::{cmp_real, Real};

#[derive(Debug, Clone, Copy)]
struct Block<T> {
    wy: T,
    w: T,
}

impl<T: Real> Block<T> {
    fn value(&self) -> T {
        self.wy / self.w
    }

    fn absorb(&mut self, other: Block<T>) {
        self.wy += other.wy;
        self.w += other.w;
    }
}

/// Value of the block holding the star centre once every free object whose
/// target lies below the pooled value has joined it. Returns the value and
/// the number of leaves pooled.
fn star_value<T: Real>(base: Block<T>, leaves: &[usize], y: &[T], w: &[T]) -> (T, usize) {
    let mut block = base;
    let mut taken = 0;
    for &l in leaves {
        if y[l] < block.value() {
            block.absorb(Block { wy: w[l] * y[l], w: w[l] });
            taken += 1;
        } else {
            break;
        }
    }
    (block.value(), taken)
}

/// Minimises `Σ w_i (p_i - y_i)^2` subject to `p` non-decreasing along
/// `chain` and `p[chain.last] <= p[l]` for every `l` in `free`.
///
/// All weights referenced must be positive. Objects outside `chain ∪ free`
/// are left untouched in the returned vector (initialised to `y`).
pub fn chain_star_regression<T: Real>(y: &[T], w: &[T], chain: &[usize], free: &[usize]) -> Vec<T> {
    let mut p = y.to_vec();
    let Some((&centre, head)) = chain.split_last() else {
        return p;
    };

    // pool-adjacent-violators over the chain head
    let mut blocks: Vec<(Block<T>, usize)> = Vec::with_capacity(head.len());
    for &c in head {
        let mut b = (Block { wy: w[c] * y[c], w: w[c] }, 1);
        while let Some(last) = blocks.last() {
            if last.0.value() > b.0.value() {
                let prev = blocks.pop().unwrap();
                b.0.absorb(prev.0);
                b.1 += prev.1;
            } else {
                break;
            }
        }
        blocks.push(b);
    }

    let mut leaves = free.to_vec();
    leaves.sort_by(|&a, &b| cmp_real(&y[a], &y[b]).then(a.cmp(&b)));

    let mut star = Block { wy: w[centre] * y[centre], w: w[centre] };
    let mut star_len = 1; // chain elements in the star block, counted from the end
    let (mut value, mut taken) = star_value(star, &leaves, y, w);
    while let Some(last) = blocks.last() {
        if last.0.value() > value {
            let prev = blocks.pop().unwrap();
            star.absorb(prev.0);
            star_len += prev.1;
            (value, taken) = star_value(star, &leaves, y, w);
        } else {
            break;
        }
    }

    let mut pos = 0;
    for (b, len) in &blocks {
        for &c in &head[pos..pos + len] {
            p[c] = b.value();
        }
        pos += len;
    }
    debug_assert_eq!(pos + star_len, chain.len());
    for &c in &chain[pos..] {
        p[c] = value;
    }
    for &l in &leaves[..taken] {
        p[l] = value;
    }
    p
}

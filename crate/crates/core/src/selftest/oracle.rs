//! Brute-force closest-vector oracle for small integer lattices, written
//! independently of the library's Hermite branch-and-bound.

/// The ℤ-span of some integer columns, in column echelon form.
pub struct IntLattice {
    /// `(pivot row, column)` pairs; each column vanishes above its pivot.
    columns: Vec<(usize, Vec<i128>)>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl IntLattice {
    pub fn new(rows: usize, cols: &[Vec<i64>]) -> Self {
        let mut work: Vec<Vec<i128>> = cols.iter().map(|c| c.iter().map(|&x| x as i128).collect()).collect();
        let mut columns = Vec::new();
        for r in 0..rows {
            // fold row r of every remaining column into the first one
            let mut i = 0;
            while i < work.len() && work[i][r] == 0 {
                i += 1;
            }
            if i == work.len() {
                continue;
            }
            let mut pivot = work.swap_remove(i);
            for c in work.iter_mut() {
                if c[r] == 0 {
                    continue;
                }
                let (a, b) = (pivot[r], c[r]);
                let (g, x, y) = ext_gcd(a, b);
                let new_pivot: Vec<i128> = pivot.iter().zip(c.iter()).map(|(p, q)| x * p + y * q).collect();
                let cleared: Vec<i128> = pivot.iter().zip(c.iter()).map(|(p, q)| (b / g) * p - (a / g) * q).collect();
                pivot = new_pivot;
                *c = cleared;
            }
            work.retain(|c| c.iter().any(|&x| x != 0));
            columns.push((r, pivot));
        }
        IntLattice { columns }
    }

    pub fn contains(&self, z: &[i64]) -> bool {
        let mut z: Vec<i128> = z.iter().map(|&x| x as i128).collect();
        for (r, col) in &self.columns {
            if z[*r] % col[*r] != 0 {
                return false;
            }
            let k = z[*r] / col[*r];
            for (zi, ci) in z.iter_mut().zip(col) {
                *zi -= k * ci;
            }
        }
        z.iter().all(|&x| x == 0)
    }
}

/// `min ‖y‖` over `y ∈ v + L` for the weighted ℓ¹ norm, by enumerating the
/// box `|y_i| ≤ ‖v‖ / w_i`. Returns the minimum as `num/den` with the
/// weights' common denominator `den`.
pub fn closest_vector(weights: &[(i64, i64)], lattice: &IntLattice, v: &[i64]) -> (i64, i64) {
    let den: i64 = weights.iter().map(|w| w.1).product();
    let w: Vec<i64> = weights.iter().map(|(a, b)| a * den / b).collect();
    let cost = |y: &[i64]| -> i64 { y.iter().zip(&w).map(|(a, b)| a.abs() * b).sum() };
    let mut best = cost(v);
    let bounds: Vec<i64> = w.iter().map(|wi| best / wi).collect();
    let mut y = vec![0i64; v.len()];
    search(0, 0, &bounds, &w, v, lattice, &mut y, &mut best);
    (best, den)
}

#[allow(clippy::too_many_arguments)]
fn search(i: usize, partial: i64, bounds: &[i64], w: &[i64], v: &[i64], lattice: &IntLattice, y: &mut Vec<i64>, best: &mut i64) {
    if i == v.len() {
        let diff: Vec<i64> = y.iter().zip(v).map(|(a, b)| a - b).collect();
        if partial < *best && lattice.contains(&diff) {
            *best = partial;
        }
        return;
    }
    for yi in -bounds[i]..=bounds[i] {
        let part = partial + yi.abs() * w[i];
        if part >= *best {
            continue;
        }
        y[i] = yi;
        search(i + 1, part, bounds, w, v, lattice, y, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let l = IntLattice::new(2, &[vec![2, 0], vec![1, 3]]);
        assert!(l.contains(&[3, 3]));
        assert!(l.contains(&[0, 6]));
        assert!(!l.contains(&[0, 3]));
        assert!(!l.contains(&[1, 0]));
        let zero = IntLattice::new(2, &[]);
        assert!(zero.contains(&[0, 0]) && !zero.contains(&[0, 1]));
    }

    #[test]
    fn cyclic_quotient() {
        // ℤ/(5): the class of 3 is closest to -2
        let l = IntLattice::new(1, &[vec![5]]);
        assert_eq!(closest_vector(&[(1, 1)], &l, &[3]), (2, 1));
        assert_eq!(closest_vector(&[(1, 2)], &l, &[10]), (0, 2));
    }
}

//! Generalized (toric) h-vectors of Eulerian face lattices, an oracle for IH dimensions that
//! shares no code with the sheaf computation.
//!
//! For a face lattice of rank `d + 1` with bottom `0` and top `1`, Stanley's recursion is
//!
//! ```text
//! h([0, x], t) = sum over y < x of g([0, y], t) * (t - 1)^(rank x - 1 - rank y)
//! g([0, y], t) = h_0 + (h_1 - h_0) t + ... + (h_m - h_{m-1}) t^m,  m = floor((rank y - 1) / 2)
//! ```
//!
//! with `g([0, 0]) = 1`. The h-vector of the lattice is `h([0, 1])`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::binomial;
use crate::fan::{Fan, Polytope};

/// A finite graded poset with a bottom and a top, stored as strict down-sets.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    rank: Vec<usize>,
    below: Vec<BTreeSet<usize>>,
    bottom: usize,
    top: usize,
}

impl FaceLattice {
    /// Build from ranks and the strict order `lt(x, y)`. Checks gradedness and Eulerian-ness.
    pub fn new(rank: Vec<usize>, lt: impl Fn(usize, usize) -> bool) -> Result<FaceLattice> {
        let n = rank.len();
        let below: Vec<BTreeSet<usize>> = (0..n).map(|y| (0..n).filter(|&x| x != y && lt(x, y)).collect()).collect();
        let bottom = (0..n).find(|&x| rank[x] == 0 && below[x].is_empty());
        let max_rank = rank.iter().copied().max().unwrap_or(0);
        let top = (0..n).find(|&x| rank[x] == max_rank && below[x].len() == n - 1);
        let (Some(bottom), Some(top)) = (bottom, top) else {
            return Err(Error::Precondition("poset needs a bottom and a top".into()));
        };
        let lat = FaceLattice { rank, below, bottom, top };
        for y in 0..n {
            for &x in &lat.below[y] {
                if lat.rank[x] >= lat.rank[y] {
                    return Err(Error::Precondition("rank is not strictly increasing".into()));
                }
            }
        }
        if !lat.is_eulerian() {
            return Err(Error::Precondition("poset is not Eulerian".into()));
        }
        Ok(lat)
    }

    /// Faces of a polytope ordered by inclusion, the empty face at the bottom.
    pub fn of_polytope(p: &Polytope) -> Result<FaceLattice> {
        let faces = p.faces();
        let sets: Vec<BTreeSet<usize>> = faces.iter().map(|f| f.vertices.iter().copied().collect()).collect();
        let rank = faces.iter().map(|f| (f.dim + 1) as usize).collect();
        FaceLattice::new(rank, |x, y| sets[x].is_subset(&sets[y]) && sets[x] != sets[y])
    }

    /// Cones of a complete fan ordered by inclusion, with an extra top element. This is the
    /// face lattice of the polar polytope when the fan is a normal fan.
    pub fn of_fan(fan: &Fan) -> Result<FaceLattice> {
        if !fan.is_complete() {
            return Err(Error::Precondition("cone poset oracle needs a complete fan".into()));
        }
        let k = fan.num_cones();
        let mut rank: Vec<usize> = fan.cones().iter().map(|c| c.dim).collect();
        rank.push(fan.dim() + 1);
        FaceLattice::new(rank, |x, y| {
            if y == k {
                return x != k;
            }
            x != k && x != y && fan.cone(y).faces.contains(&x)
        })
    }

    /// The order-reversed poset.
    pub fn dual(&self) -> Result<FaceLattice> {
        let r = self.rank[self.top];
        let rank = self.rank.iter().map(|&x| r - x).collect();
        FaceLattice::new(rank, |x, y| self.below[x].contains(&y))
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    /// Dimension of the polytope the lattice describes (rank of the top minus one).
    pub fn dim(&self) -> usize {
        self.rank[self.top] - 1
    }

    fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.below[y].contains(&x)
    }

    /// Every nontrivial interval has as many elements of even rank as of odd rank.
    pub fn is_eulerian(&self) -> bool {
        let n = self.len();
        (0..n).all(|y| {
            self.below[y].iter().all(|&x| {
                let s: i64 = (0..n)
                    .filter(|&z| self.leq(x, z) && self.leq(z, y))
                    .map(|z| if self.rank[z].is_multiple_of(2) { 1 } else { -1 })
                    .sum();
                s == 0
            })
        })
    }

    /// Number of elements of each rank `1..=dim + 1`, i.e. the f-vector `f_0, ..., f_{d-1}`
    /// followed by the single top.
    pub fn f_vector(&self) -> Vec<usize> {
        let r = self.rank[self.top];
        (1..r).map(|k| self.rank.iter().filter(|&&x| x == k).count()).collect()
    }
}

/// Integer polynomials as coefficient vectors, lowest degree first.
fn poly_add_scaled(acc: &mut Vec<i64>, p: &[i64], q: &[i64]) {
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            if acc.len() <= i + j {
                acc.resize(i + j + 1, 0);
            }
            acc[i + j] += a * b;
        }
    }
}

fn t_minus_one_pow(k: usize) -> Vec<i64> {
    let mut out = vec![1i64];
    for _ in 0..k {
        let mut next = vec![0i64; out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c;
        }
        out = next;
    }
    out
}

/// Generalized h-vector `(h_0, ..., h_d)` of the whole lattice.
pub fn generalized_h(lat: &FaceLattice) -> Vec<i64> {
    let n = lat.len();
    // elements in increasing rank so every g below is ready
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| lat.rank[x]);
    let mut g: Vec<Vec<i64>> = vec![Vec::new(); n];
    let mut top_h = Vec::new();
    for &x in &order {
        if x == lat.bottom {
            g[x] = vec![1];
            continue;
        }
        let r = lat.rank[x];
        let mut h = Vec::new();
        for &y in &lat.below[x] {
            poly_add_scaled(&mut h, &g[y], &t_minus_one_pow(r - 1 - lat.rank[y]));
        }
        h.resize(r, 0);
        if x == lat.top {
            top_h = h;
            continue;
        }
        let m = (r - 1) / 2;
        g[x] = (0..=m).map(|i| if i == 0 { h[0] } else { h[i] - h[i - 1] }).collect();
    }
    top_h
}

/// Classical h-vector of a simplicial polytope from `f_{-1} = 1, f_0, ..., f_{d-1}`.
pub fn simplicial_h(f: &[usize]) -> Vec<i64> {
    let d = f.len() - 1;
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial((d - i) as u64, (k - i) as u64) as i64 * f[i] as i64
                })
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub ih: Vec<usize>,
    pub h: Vec<i64>,
    pub matches: bool,
}

/// Compare IH dimensions of a complete fan with the generalized h-vector of its cone poset.
pub fn compare_ih(fan: &Fan, ih: &[usize]) -> Result<Comparison> {
    let h = generalized_h(&FaceLattice::of_fan(fan)?);
    let matches = h.len() == ih.len() && h.iter().zip(ih).all(|(a, &b)| *a == b as i64);
    Ok(Comparison { ih: ih.to_vec(), h, matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Scalar;

    fn poly(vs: &[&[i64]]) -> Polytope {
        Polytope::from_vertices(vs.iter().map(|v| v.iter().map(|&x| Scalar::int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn small_lattices() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(generalized_h(&FaceLattice::of_polytope(&sq).unwrap()), vec![1, 2, 1]);
        let cube = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0], &[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let lat = FaceLattice::of_polytope(&cube).unwrap();
        assert_eq!(generalized_h(&lat), vec![1, 5, 5, 1]);
        assert_eq!(generalized_h(&lat.dual().unwrap()), vec![1, 3, 3, 1]);
        let simplex = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(generalized_h(&FaceLattice::of_polytope(&simplex).unwrap()), vec![1, 1, 1, 1]);
    }
}

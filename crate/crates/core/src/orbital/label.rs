use crate::error::{Error, Result};
use crate::localfield::{Composition, LaurentSeries, MatrixLF};

/// A relevant element `w_M t`: `w_M` is block-antidiagonal of the given
/// type and `t = diag(a_1 Id_{r_1}, ..., a_m Id_{r_m})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitLabel {
    pub composition: Composition,
    pub torus: Vec<LaurentSeries>,
}

impl OrbitLabel {
    pub fn new(composition: Composition, torus: Vec<LaurentSeries>) -> Result<Self> {
        if torus.len() != composition.parts().len() {
            return Err(Error::precondition(format!(
                "{} torus entries for composition {composition}",
                torus.len()
            )));
        }
        if torus.iter().any(|a| a.is_zero()) {
            return Err(Error::precondition("torus entries must be nonzero"));
        }
        let p = torus[0].modulus();
        if let Some(a) = torus.iter().find(|a| a.modulus() != p) {
            return Err(Error::PrimeMismatch(p, a.modulus()));
        }
        Ok(OrbitLabel { composition, torus })
    }

    /// The diagonal orbit `diag(t_1, ..., t_r)`.
    pub fn diagonal(torus: Vec<LaurentSeries>) -> Result<Self> {
        Self::new(Composition::ones(torus.len()), torus)
    }

    /// `w_{G_r} (z Id_r)`.
    pub fn longest(r: usize, z: LaurentSeries) -> Result<Self> {
        Self::new(Composition::whole(r), vec![z])
    }

    pub fn rank(&self) -> usize {
        self.composition.rank()
    }

    pub fn modulus(&self) -> u32 {
        self.torus[0].modulus()
    }

    /// Sum of `|v(a_i)|`, a rough size used to choose working precision.
    pub(crate) fn valuation_spread(&self) -> i32 {
        self.torus.iter().map(|a| a.valuation().unwrap_or(0).abs()).sum()
    }
}

/// `w_M t` as an explicit matrix.
pub fn relevant_representative(o: &OrbitLabel, prec: i32) -> MatrixLF {
    let p = o.modulus();
    let blocks = o.composition.block_of();
    let starts = o.composition.block_starts();
    let parts = o.composition.parts();
    MatrixLF::from_fn(o.rank(), |i, j| {
        let b = blocks[i];
        // inside block b, w_{G_{r_b}} sends local index k to r_b - 1 - k
        let local_i = i - starts[b];
        if blocks[j] == b && j - starts[b] == parts[b] - 1 - local_i {
            o.torus[b].clone()
        } else {
            LaurentSeries::zero(p, prec)
        }
    })
}

/// Positions `(i, j)`, `i < j`, of the unipotent radical `N_w` of the
/// standard parabolic of this type: entries between different blocks.
pub fn radical_positions(c: &Composition) -> Vec<(usize, usize)> {
    let blocks = c.block_of();
    let r = c.rank();
    (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| blocks[i] < blocks[j]).collect()
}

/// Positions of `V_w = N_r cap M_w`: strictly upper entries inside blocks.
pub fn levi_positions(c: &Composition) -> Vec<(usize, usize)> {
    let blocks = c.block_of();
    let r = c.rank();
    (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| blocks[i] == blocks[j]).collect()
}

/// All strictly upper positions of `N_r`.
pub fn upper_positions(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect()
}

/// Upper unitriangular matrix with the given entries at `positions`.
pub fn unipotent(p: u32, r: usize, positions: &[(usize, usize)], values: &[LaurentSeries], prec: i32) -> MatrixLF {
    let mut n = MatrixLF::identity(p, r, prec);
    for (&(i, j), v) in positions.iter().zip(values) {
        n.set(i, j, v.clone());
    }
    n
}

fn supported_on(n: &MatrixLF, allowed: &[(usize, usize)]) -> bool {
    let r = n.size();
    n.is_upper_unitriangular()
        && (0..r).all(|i| (i + 1..r).all(|j| allowed.contains(&(i, j)) || n.get(i, j).is_zero()))
}

/// `t u1 . w t . v . u2` without the leading `w_{G_r}`.
pub(crate) fn kloosterman_point(o: &OrbitLabel, u1: &MatrixLF, v: &MatrixLF, u2: &MatrixLF, prec: i32) -> Result<MatrixLF> {
    let wt = relevant_representative(o, prec);
    MatrixLF::product(&[&u1.transpose(), &wt, v, u2])
}

/// `w_{G_r} . t u1 . w t . v . u2` with `u1, u2 in N_w` and `v in V_w`.
pub fn orbit_point(o: &OrbitLabel, u1: &MatrixLF, v: &MatrixLF, u2: &MatrixLF) -> Result<MatrixLF> {
    let r = o.rank();
    if [u1, v, u2].iter().any(|m| m.size() != r) {
        return Err(Error::precondition("unipotent factors must match the rank"));
    }
    let radical = radical_positions(&o.composition);
    let levi = levi_positions(&o.composition);
    if !supported_on(u1, &radical) || !supported_on(u2, &radical) {
        return Err(Error::precondition("u1 and u2 must lie in N_w"));
    }
    if !supported_on(v, &levi) {
        return Err(Error::precondition("v must lie in V_w"));
    }
    let prec = [u1, v, u2].iter().map(|m| m.precision()).min().unwrap_or(0).max(1);
    let k = kloosterman_point(o, u1, v, u2, prec + o.valuation_spread())?;
    MatrixLF::longest_weyl(o.modulus(), r, prec + o.valuation_spread()).checked_mul(&k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn t(p: u32, k: i32) -> LaurentSeries {
        LaurentSeries::monomial(p, 1, k, 12)
    }

    #[test]
    fn representatives() {
        let p = 7;
        let d = relevant_representative(&OrbitLabel::diagonal(vec![t(p, 1), t(p, -1)]).unwrap(), 12);
        assert_eq!(d, MatrixLF::diagonal(&[t(p, 1), t(p, -1)], 12));
        let a = LaurentSeries::constant(p, 3, 12);
        let b = LaurentSeries::constant(p, 5, 12);
        let o = OrbitLabel::new(Composition::new(vec![2, 1]).unwrap(), vec![a.clone(), b.clone()]).unwrap();
        let m = relevant_representative(&o, 12);
        let z = LaurentSeries::zero(p, 12);
        let expected = MatrixLF::new(3, vec![z.clone(), a.clone(), z.clone(), a, z.clone(), z.clone(), z.clone(), z, b]).unwrap();
        assert_eq!(m, expected);
        assert_eq!(Composition::all(3).len(), 4);
    }

    #[test]
    fn identity_unipotents() {
        let p = 7;
        let o = OrbitLabel::longest(3, LaurentSeries::constant(p, 2, 12)).unwrap();
        let id = MatrixLF::identity(p, 3, 12);
        let pt = orbit_point(&o, &id, &id, &id).unwrap();
        let expected = MatrixLF::longest_weyl(p, 3, 12).checked_mul(&relevant_representative(&o, 12)).unwrap();
        assert_eq!(pt, expected);
        let mut bad = id.clone();
        bad.set(0, 1, t(p, 0));
        // (0, 1) lies inside the single block: not in N_w
        assert!(orbit_point(&o, &bad, &id, &id).is_err());
    }

    #[test]
    fn parametrization_is_injective_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let p = 7;
        for c in [Composition::ones(2), Composition::ones(3), Composition::new(vec![2, 1]).unwrap(), Composition::new(vec![1, 2]).unwrap()] {
            let r = c.rank();
            let torus: Vec<LaurentSeries> =
                c.parts().iter().map(|_| LaurentSeries::constant(p, rng.gen_range(1..7), 12)).collect();
            let o = OrbitLabel::new(c.clone(), torus).unwrap();
            let rad = radical_positions(&c);
            let lev = levi_positions(&c);
            let mut seen = HashSet::new();
            for _ in 0..50 {
                let mut sample = |pos: &[(usize, usize)]| {
                    let vals: Vec<LaurentSeries> = pos
                        .iter()
                        .map(|_| {
                            let d: Vec<i64> = (0..3).map(|_| rng.gen_range(0..7)).collect();
                            LaurentSeries::from_coeffs(p, -1, &d, 8).unwrap()
                        })
                        .collect();
                    unipotent(p, r, pos, &vals, 12)
                };
                let (u1, v, u2) = (sample(&rad), sample(&lev), sample(&rad));
                let pt = orbit_point(&o, &u1, &v, &u2).unwrap();
                seen.insert((format!("{u1:?}{v:?}{u2:?}"), format!("{pt:?}")));
            }
            let params: HashSet<_> = seen.iter().map(|(a, _)| a.clone()).collect();
            let points: HashSet<_> = seen.iter().map(|(_, b)| b.clone()).collect();
            assert_eq!(params.len(), points.len(), "composition {c}");
        }
    }
}

use super::matrix::{axpy, combine, identity, rref, zero_vector, Matrix, Vector};
use super::subspace::{complement, Subspace};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};

/// Solves `c * B = x` for a fixed independent row set `B`.
#[derive(Clone, Debug)]
struct BasisSolver {
    /// reduced rows of `B`, with the combination of original rows producing each
    reduced: Matrix,
    transforms: Matrix,
    pivots: Vec<usize>,
}

impl BasisSolver {
    fn new(f: &Field, rows: &[Vector], ncols: usize) -> Self {
        let k = rows.len();
        let augmented: Matrix = rows
            .iter()
            .zip(identity(k))
            .map(|(r, id)| r.iter().copied().chain(id).collect())
            .collect();
        let (red, pivots) = rref(f, augmented, ncols + k);
        let pivots: Vec<usize> = pivots.into_iter().filter(|&p| p < ncols).collect();
        let reduced = red
            .iter()
            .take(pivots.len())
            .map(|r| r[..ncols].to_vec())
            .collect();
        let transforms = red
            .iter()
            .take(pivots.len())
            .map(|r| r[ncols..].to_vec())
            .collect();
        BasisSolver {
            reduced,
            transforms,
            pivots,
        }
    }

    fn solve(&self, f: &Field, x: &[Fe], k: usize) -> Option<Vector> {
        let mut coeffs = zero_vector(k);
        let mut rest = x.to_vec();
        for ((row, tr), &p) in self.reduced.iter().zip(&self.transforms).zip(&self.pivots) {
            let c = rest[p];
            if c.is_zero() {
                continue;
            }
            axpy(f, &mut coeffs, c, tr);
            axpy(f, &mut rest, f.neg(c), row);
        }
        rest.iter().all(|r| r.is_zero()).then_some(coeffs)
    }
}

/// An ordered direct sum decomposition `ambient = S_0 (+) S_1 (+) ..`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    ambient: Subspace,
    summands: Vec<Subspace>,
    offsets: Vec<usize>,
    stacked: Matrix,
    solver: BasisSolver,
}

impl Decomposition {
    pub fn new(f: &Field, summands: Vec<Subspace>) -> Result<Self> {
        let Some(first) = summands.first() else {
            return Err(Error::InvalidDecomposition("no summands".into()));
        };
        let n = first.ambient_dim();
        let mut stacked = Vec::new();
        let mut offsets = Vec::with_capacity(summands.len());
        for s in &summands {
            if s.ambient_dim() != n {
                return Err(Error::DimensionMismatch(
                    "summands in different ambient spaces".into(),
                ));
            }
            offsets.push(stacked.len());
            stacked.extend(s.basis().iter().cloned());
        }
        let ambient = Subspace::span(f, n, &stacked)?;
        if ambient.dim() != stacked.len() {
            return Err(Error::InvalidDecomposition(
                "summands are not independent".into(),
            ));
        }
        let solver = BasisSolver::new(f, &stacked, n);
        Ok(Decomposition {
            ambient,
            summands,
            offsets,
            stacked,
            solver,
        })
    }

    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn summands(&self) -> &[Subspace] {
        &self.summands
    }

    /// Component of `x` in summand `index`.
    pub fn project(&self, f: &Field, x: &[Fe], index: usize) -> Result<Vector> {
        if index >= self.summands.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.summands.len(),
            });
        }
        let coeffs = self.coefficients(f, x)?;
        let lo = self.offsets[index];
        let hi = lo + self.summands[index].dim();
        Ok(combine(
            f,
            &coeffs[lo..hi],
            &self.stacked[lo..hi],
            self.ambient.ambient_dim(),
        ))
    }

    /// All components of `x`, in summand order.
    pub fn components(&self, f: &Field, x: &[Fe]) -> Result<Vec<Vector>> {
        (0..self.summands.len())
            .map(|i| self.project(f, x, i))
            .collect()
    }

    /// Coordinates of `x` in summand `index`'s canonical basis.
    pub fn summand_coordinates(&self, f: &Field, x: &[Fe], index: usize) -> Result<Vector> {
        if index >= self.summands.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.summands.len(),
            });
        }
        let coeffs = self.coefficients(f, x)?;
        let lo = self.offsets[index];
        Ok(coeffs[lo..lo + self.summands[index].dim()].to_vec())
    }

    fn coefficients(&self, f: &Field, x: &[Fe]) -> Result<Vector> {
        if x.len() != self.ambient.ambient_dim() {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        self.solver
            .solve(f, x, self.stacked.len())
            .ok_or(Error::NotContained("vector", "the decomposed space"))
    }
}

/// `V/U`, realized through a section `W` with `V = U (+) W`.
///
/// Quotient vectors are coordinate vectors in the canonical basis of `W`.
#[derive(Clone, Debug)]
pub struct Quotient {
    space: Subspace,
    kernel: Subspace,
    section: Subspace,
    decomposition: Decomposition,
}

impl Quotient {
    /// Uses the greedy complement of `u` in `v` as the section.
    pub fn new(f: &Field, v: &Subspace, u: &Subspace) -> Result<Self> {
        if !u.is_subspace_of(f, v) {
            return Err(Error::NotContained("kernel", "the space"));
        }
        let w = complement(f, u, v)?;
        Quotient::with_section(f, v, u, w)
    }

    pub fn with_section(f: &Field, v: &Subspace, u: &Subspace, w: Subspace) -> Result<Self> {
        if !u.is_subspace_of(f, v) {
            return Err(Error::NotContained("kernel", "the space"));
        }
        if !w.is_subspace_of(f, v) {
            return Err(Error::NotContained("section", "the space"));
        }
        let decomposition = Decomposition::new(f, vec![u.clone(), w.clone()])?;
        if decomposition.ambient() != v {
            return Err(Error::InvalidDecomposition(
                "section is not a complement of the kernel".into(),
            ));
        }
        Ok(Quotient {
            space: v.clone(),
            kernel: u.clone(),
            section: w,
            decomposition,
        })
    }

    pub fn dim(&self) -> usize {
        self.section.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn section(&self) -> &Subspace {
        &self.section
    }

    /// `x + U`, as coordinates.
    pub fn push(&self, f: &Field, x: &[Fe]) -> Result<Vector> {
        self.decomposition.summand_coordinates(f, x, 1)
    }

    /// The representative of a class inside the section.
    pub fn lift(&self, f: &Field, class: &[Fe]) -> Result<Vector> {
        if class.len() != self.dim() {
            return Err(Error::DimensionMismatch("quotient vector length".into()));
        }
        Ok(self.section.vector_from_coordinates(f, class))
    }

    /// Image of a subspace of `V` in `V/U`.
    pub fn push_subspace(&self, f: &Field, s: &Subspace) -> Result<Subspace> {
        let vectors = s
            .basis()
            .iter()
            .map(|v| self.push(f, v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(f, self.dim(), &vectors)
    }

    /// Preimage in `V` of a subspace of `V/U`; always contains `U`.
    pub fn lift_subspace(&self, f: &Field, s: &Subspace) -> Result<Subspace> {
        let mut vectors = s
            .basis()
            .iter()
            .map(|c| self.lift(f, c))
            .collect::<Result<Vec<_>>>()?;
        vectors.extend(self.kernel.basis().iter().cloned());
        Subspace::span(f, self.space.ambient_dim(), &vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{add_vec, unit_vector};
    use crate::linalg::{enumerate_subspaces, is_opposite};
    use rand::{Rng, SeedableRng};

    #[test]
    fn projection_examples() {
        let f = Field::new(5, 1, 1).unwrap();
        let a = Subspace::span(&f, 3, &[unit_vector(3, 0)]).unwrap();
        let b = Subspace::span(
            &f,
            3,
            &[vec![Fe(1), Fe(1), Fe(0)], vec![Fe(0), Fe(3), Fe(1)]],
        )
        .unwrap();
        let d = Decomposition::new(&f, vec![a.clone(), b.clone()]).unwrap();
        let x = unit_vector(3, 0);
        assert_eq!(d.project(&f, &x, 0).unwrap(), x);
        assert_eq!(d.project(&f, &x, 1).unwrap(), zero_vector(3));
        assert!(matches!(
            d.project(&f, &x, 2),
            Err(Error::IndexOutOfRange { .. })
        ));

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x: Vector = (0..3).map(|_| Fe(rng.gen_range(0..5))).collect();
            let parts = d.components(&f, &x).unwrap();
            assert_eq!(add_vec(&f, &parts[0], &parts[1]), x);
            assert!(a.contains_vector(&f, &parts[0]));
            assert!(b.contains_vector(&f, &parts[1]));
        }
    }

    #[test]
    fn dependent_summands_rejected() {
        let f = Field::new(3, 1, 1).unwrap();
        let a = Subspace::span(&f, 2, &[unit_vector(2, 0)]).unwrap();
        assert!(Decomposition::new(&f, vec![a.clone(), a]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let f = Field::new(3, 1, 1).unwrap();
        let v = Subspace::full(4);
        let q0 = Quotient::new(&f, &v, &Subspace::zero(4)).unwrap();
        assert_eq!(q0.dim(), 4);
        let qv = Quotient::new(&f, &v, &v).unwrap();
        assert_eq!(qv.dim(), 0);
        for u in enumerate_subspaces(&f, 4, 2).into_iter().step_by(17) {
            let q = Quotient::new(&f, &v, &u).unwrap();
            assert_eq!(q.dim(), 2);
            assert!(is_opposite(&f, &u, q.section()).unwrap());
            for b in u.basis() {
                assert!(q.push(&f, b).unwrap().iter().all(|c| c.is_zero()));
            }
            for class in [vec![Fe(1), Fe(0)], vec![Fe(2), Fe(1)]] {
                let lifted = q.lift(&f, &class).unwrap();
                assert_eq!(q.push(&f, &lifted).unwrap(), class);
            }
        }
    }
}

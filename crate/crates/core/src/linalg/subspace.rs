use super::matrix::{eliminate, Matrix};
use super::scalar::Field;
use crate::error::{Error, Result};

/// A linear subspace of `F^ambient`, stored canonically as the reduced row
/// echelon form of a basis. Two subspaces are equal iff their bases are equal.
#[derive(Clone, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn from_rows(ambient: usize, rows: Vec<Vec<F>>) -> Self {
        let (rows, pivots) = eliminate(rows, ambient, true);
        Subspace { ambient, basis: Matrix::from_rows(rows, ambient), pivots }
    }

    pub fn row_space(m: &Matrix<F>) -> Self {
        Self::from_rows(m.cols(), m.row_vecs())
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the standard basis vectors `e_c` for the given coordinates.
    pub fn coordinate(ambient: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        let rows = coords
            .into_iter()
            .map(|c| {
                let mut v = vec![F::zero(); ambient];
                v[c] = F::one();
                v
            })
            .collect();
        Self::from_rows(ambient, rows)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after reduction by the basis; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        let mut v = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (c, b) in self.basis.row(r).iter().enumerate().skip(p) {
                if !b.is_zero() {
                    v[c].sub_mul_assign(&f, b);
                }
            }
        }
        v
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }

    pub fn contains(&self, other: &Subspace<F>) -> bool {
        self.ambient == other.ambient && (0..other.dim()).all(|r| self.contains_vector(other.basis.row(r)))
    }

    fn check_ambient(&self, other: &Subspace<F>) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_ambient(other)?;
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Ok(Self::from_rows(self.ambient, rows))
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_ambient(other)?;
        if other.is_full() || self.is_zero() {
            return Ok(self.clone());
        }
        if self.is_full() || other.is_zero() {
            return Ok(other.clone());
        }
        let ann = other.annihilator();
        // coefficients c with ann · (Σ c_r a_r) = 0
        let coupling = ann.mul(&self.basis.transpose());
        let coeffs = kernel(&coupling);
        let rows = coeffs
            .basis_vectors()
            .into_iter()
            .map(|c| combine(&self.basis, &c))
            .collect();
        Ok(Self::from_rows(self.ambient, rows))
    }

    /// Rows are linear functionals whose common zero set is this subspace.
    pub fn annihilator(&self) -> Matrix<F> {
        let free: Vec<usize> = {
            let mut is_pivot = vec![false; self.ambient];
            for &p in &self.pivots {
                is_pivot[p] = true;
            }
            (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
        };
        // functional for free column f: e_f^* − Σ_r basis[r][f] e_{p_r}^*
        let rows = free
            .iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.ambient];
                v[f] = F::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    v[p] = self.basis.get(r, f).negated();
                }
                v
            })
            .collect();
        Matrix::from_rows(rows, self.ambient)
    }

    /// `dim self − dim(self ∩ other)`, i.e. the dimension of `self / (self ∩ other)`.
    pub fn quotient_dim(&self, other: &Subspace<F>) -> Result<usize> {
        Ok(self.dim() - self.intersect(other)?.dim())
    }

    /// Image of this subspace under `m` (a map `F^ambient → F^{m.rows()}`).
    pub fn image(&self, m: &Matrix<F>) -> Subspace<F> {
        assert_eq!(m.cols(), self.ambient, "ambient mismatch in image");
        let rows = (0..self.dim()).map(|r| m.apply(self.basis.row(r))).collect();
        Self::from_rows(m.rows(), rows)
    }

    /// `{x : m·x ∈ self}`.
    pub fn preimage(&self, m: &Matrix<F>) -> Subspace<F> {
        assert_eq!(m.rows(), self.ambient, "ambient mismatch in preimage");
        kernel(&self.annihilator().mul(m))
    }

    /// Intersection with the coordinate subspace spanned by `keep`.
    pub fn restrict_to_coordinates(&self, keep: &[bool]) -> Subspace<F> {
        assert_eq!(keep.len(), self.ambient);
        let dropped: Vec<usize> = (0..self.ambient).filter(|&c| !keep[c]).collect();
        if dropped.is_empty() {
            return self.clone();
        }
        let coupling = Matrix::from_fn(dropped.len(), self.dim(), |r, c| self.basis.get(c, dropped[r]).clone());
        let coeffs = kernel(&coupling);
        let rows = coeffs
            .basis_vectors()
            .into_iter()
            .map(|c| combine(&self.basis, &c))
            .collect();
        Self::from_rows(self.ambient, rows)
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> Subspace<G> {
        Subspace { ambient: self.ambient, basis: self.basis.map(f), pivots: self.pivots.clone() }
    }
}

fn combine<F: Field>(rows: &Matrix<F>, coeffs: &[F]) -> Vec<F> {
    let mut v = vec![F::zero(); rows.cols()];
    for (r, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (x, b) in v.iter_mut().zip(rows.row(r)) {
            if !b.is_zero() {
                *x = x.plus(&c.times(b));
            }
        }
    }
    v
}

/// `{x : m·x = 0}`.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Subspace<F> {
    Subspace::row_space(m).complement_of_rows()
}

impl<F: Field> Subspace<F> {
    /// Orthogonal complement under the standard pairing.
    fn complement_of_rows(&self) -> Subspace<F> {
        Subspace::from_rows(self.ambient, self.annihilator().row_vecs())
    }
}

/// Sum, containment `b ⊆ a`, and `dim a − dim(a ∩ b)` in one call.
pub fn sum_contains_quotient<F: Field>(a: &Subspace<F>, b: &Subspace<F>) -> Result<(Subspace<F>, bool, usize)> {
    let sum = a.sum(b)?;
    let contains = a.contains(b);
    let quotient = a.quotient_dim(b)?;
    Ok((sum, contains, quotient))
}

impl<F: Field> std::fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

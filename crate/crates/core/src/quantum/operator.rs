use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::pauli::{walsh_hadamard, Pauli, PauliString, PauliSum};
use super::state::{StateVector, C64};
use crate::error::{invalid, QslError, Result};

/// Largest Hilbert-space dimension handled by the dense paths.
pub const MAX_DIM: usize = 1 << 14;

/// Tolerance on ‖M − M†‖ for dense operators.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Dense(DMatrix<C64>),
    Diagonal(Vec<f64>),
    Pauli(PauliSum),
}

#[derive(Debug)]
enum Spectral {
    Diagonal(Vec<f64>),
    Hadamard(Vec<f64>),
    Eigen { values: Vec<f64>, vectors: DMatrix<C64> },
}

/// Hermitian operator with a lazily computed, shared spectral cache.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    repr: Representation,
    dim: usize,
    spectral: Arc<OnceLock<std::result::Result<Spectral, QslError>>>,
    dense: Arc<OnceLock<DMatrix<C64>>>,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr
    }
}

fn check_cap(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        return Err(QslError::DimensionCap { dim, cap: MAX_DIM });
    }
    Ok(())
}

impl HermitianOperator {
    fn from_repr(repr: Representation, dim: usize) -> Self {
        Self {
            repr,
            dim,
            spectral: Arc::new(OnceLock::new()),
            dense: Arc::new(OnceLock::new()),
        }
    }

    pub fn dense(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(QslError::DimensionMismatch { left: m.nrows(), right: m.ncols() });
        }
        let dim = m.nrows();
        if dim < 2 {
            return Err(invalid("operator dimension must be at least 2"));
        }
        check_cap(dim)?;
        let mut dev = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if !(dev <= HERMITIAN_TOL) {
            return Err(QslError::NotHermitian(dev));
        }
        Ok(Self::from_repr(Representation::Dense(m), dim))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid("operator rows must form a square matrix"));
        }
        Self::dense(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diagonal(values: Vec<f64>) -> Result<Self> {
        let dim = values.len();
        if dim < 2 {
            return Err(invalid("operator dimension must be at least 2"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("diagonal entries must be finite"));
        }
        Ok(Self::from_repr(Representation::Diagonal(values), dim))
    }

    pub fn pauli_sum(sum: PauliSum) -> Result<Self> {
        let dim = sum.dim();
        check_cap(dim)?;
        Ok(Self::from_repr(Representation::Pauli(sum), dim))
    }

    pub fn pauli(p: Pauli) -> Self {
        let s = PauliString::new(&[p]).expect("single site");
        Self::pauli_sum(PauliSum::new(1, vec![(1.0, s)]).expect("valid sum")).expect("dim 2")
    }

    pub fn sigma_x() -> Self {
        Self::pauli(Pauli::X)
    }

    pub fn sigma_y() -> Self {
        Self::pauli(Pauli::Y)
    }

    pub fn sigma_z() -> Self {
        Self::pauli(Pauli::Z)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(vec![1.0; dim])
    }

    /// Rank-one projector |ψ⟩⟨ψ|.
    pub fn projector(psi: &StateVector) -> Result<Self> {
        let v = psi.as_dvector();
        Self::dense(v * v.adjoint())
    }

    /// n·σ for the unit vector n(θ, φ).
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let e = C64::from_polar(st, -phi);
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(ct, 0.0), e, e.conj(), C64::new(-ct, 0.0)],
        );
        Self::from_repr(Representation::Dense(m), 2)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.dim {
            return Err(QslError::DimensionMismatch { left: self.dim, right: v.len() });
        }
        Ok(match &self.repr {
            Representation::Dense(m) => m * v,
            Representation::Diagonal(d) => {
                DVector::from_iterator(self.dim, v.iter().zip(d).map(|(a, x)| a * *x))
            }
            Representation::Pauli(p) => DVector::from_vec(p.apply(v.as_slice())),
        })
    }

    /// Dense matrix form, expanded once on request.
    pub fn to_dense(&self) -> &DMatrix<C64> {
        match &self.repr {
            Representation::Dense(m) => m,
            Representation::Diagonal(d) => self.dense.get_or_init(|| {
                DMatrix::from_diagonal(&DVector::from_iterator(
                    d.len(),
                    d.iter().map(|&x| C64::new(x, 0.0)),
                ))
            }),
            Representation::Pauli(p) => self.dense.get_or_init(|| p.to_dense()),
        }
    }

    fn spectral(&self) -> Result<&Spectral> {
        let cached = self.spectral.get_or_init(|| match &self.repr {
            Representation::Diagonal(d) => Ok(Spectral::Diagonal(d.clone())),
            Representation::Pauli(p) if p.is_z_type() => Ok(Spectral::Diagonal(p.z_diagonal())),
            Representation::Pauli(p) if p.is_x_type() => Ok(Spectral::Hadamard(p.x_spectrum())),
            _ => {
                let m = self.to_dense().clone();
                SymmetricEigen::try_new(m, 1e-15, 0)
                    .map(|e| Spectral::Eigen {
                        values: e.eigenvalues.iter().copied().collect(),
                        vectors: e.eigenvectors,
                    })
                    .ok_or_else(|| QslError::Eigen("eigensolver did not converge".into()))
            }
        });
        cached.as_ref().map_err(Clone::clone)
    }

    /// Eigenvalues, in no particular order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(match self.spectral()? {
            Spectral::Diagonal(v) | Spectral::Hadamard(v) => v.clone(),
            Spectral::Eigen { values, .. } => values.clone(),
        })
    }

    /// Propagator for a fixed initial state, reusable across many times.
    pub fn propagator(&self, psi0: &StateVector, hbar: f64) -> Result<Propagator> {
        psi0.check_dim(self.dim)?;
        if !(hbar > 0.0) {
            return Err(invalid("hbar must be positive"));
        }
        let v = psi0.as_dvector();
        let (basis, coeffs, energies) = match self.spectral()? {
            Spectral::Diagonal(e) => (PropBasis::Computational, v.clone(), e.clone()),
            Spectral::Hadamard(e) => {
                let mut c = v.as_slice().to_vec();
                walsh_hadamard(&mut c);
                let s = 1.0 / (self.dim as f64).sqrt();
                c.iter_mut().for_each(|x| *x *= s);
                (PropBasis::Hadamard, DVector::from_vec(c), e.clone())
            }
            Spectral::Eigen { values, vectors } => (
                PropBasis::Eigen(vectors.clone()),
                vectors.adjoint() * v,
                values.clone(),
            ),
        };
        Ok(Propagator { basis, coeffs, energies, hbar, psi0: psi0.clone() })
    }
}

#[derive(Debug, Clone)]
enum PropBasis {
    Computational,
    Hadamard,
    Eigen(DMatrix<C64>),
}

/// e^{−iHt/ħ}|ψ0⟩ for a fixed H and ψ0, the eigenbasis coefficients precomputed.
#[derive(Debug, Clone)]
pub struct Propagator {
    basis: PropBasis,
    coeffs: DVector<C64>,
    energies: Vec<f64>,
    hbar: f64,
    psi0: StateVector,
}

impl Propagator {
    pub fn at(&self, t: f64) -> Result<StateVector> {
        if !t.is_finite() {
            return Err(invalid("evolution time must be finite"));
        }
        if t == 0.0 {
            return Ok(self.psi0.clone());
        }
        let phased = DVector::from_iterator(
            self.coeffs.len(),
            self.coeffs
                .iter()
                .zip(&self.energies)
                .map(|(c, e)| c * C64::from_polar(1.0, -e * t / self.hbar)),
        );
        let out = match &self.basis {
            PropBasis::Computational => phased,
            PropBasis::Hadamard => {
                let mut v = phased.as_slice().to_vec();
                walsh_hadamard(&mut v);
                let s = 1.0 / (v.len() as f64).sqrt();
                DVector::from_iterator(v.len(), v.into_iter().map(|x| x * s))
            }
            PropBasis::Eigen(vectors) => vectors * phased,
        };
        Ok(StateVector::from_dvector_unchecked(out))
    }

    pub fn initial(&self) -> &StateVector {
        &self.psi0
    }
}

/// e^{−iHt/ħ}|ψ0⟩.
pub fn evolve(h: &HermitianOperator, psi0: &StateVector, t: f64, hbar: f64) -> Result<StateVector> {
    h.propagator(psi0, hbar)?.at(t)
}

/// Kronecker products of states or operators, in list order.
pub trait Kron: Sized {
    fn kron(&self, other: &Self) -> Result<Self>;
}

impl Kron for StateVector {
    fn kron(&self, other: &Self) -> Result<Self> {
        let a = self.as_dvector();
        let b = other.as_dvector();
        check_cap(a.len() * b.len())?;
        Ok(StateVector::from_dvector_unchecked(a.kronecker(b)))
    }
}

impl Kron for HermitianOperator {
    fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim * other.dim;
        check_cap(dim)?;
        let repr = match (&self.repr, &other.repr) {
            (Representation::Diagonal(a), Representation::Diagonal(b)) => Representation::Diagonal(
                a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect(),
            ),
            (Representation::Pauli(a), Representation::Pauli(b)) => {
                Representation::Pauli(a.kron(b))
            }
            _ => Representation::Dense(self.to_dense().kronecker(other.to_dense())),
        };
        Ok(HermitianOperator::from_repr(repr, dim))
    }
}

pub fn tensor<T: Kron + Clone>(parts: &[T]) -> Result<T> {
    let (first, rest) = parts.split_first().ok_or(QslError::Empty("tensor factors"))?;
    rest.iter().try_fold(first.clone(), |acc, p| acc.kron(p))
}

/// ψ^{⊗m}.
pub fn tensor_power<T: Kron + Clone>(part: &T, m: usize) -> Result<T> {
    if m == 0 {
        return Err(QslError::Empty("tensor factors"));
    }
    tensor(&vec![part.clone(); m])
}

use nalgebra::DMatrix;

use super::state::C64;
use crate::error::{invalid, Result};

/// Single-site Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Tensor product of Pauli factors stored in symplectic form.
///
/// Site 0 is the leftmost Kronecker factor, i.e. the most significant bit
/// of a computational basis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    sites: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn new(factors: &[Pauli]) -> Result<Self> {
        let n = factors.len();
        if n == 0 || n > 63 {
            return Err(invalid(format!("Pauli string length {n} out of range")));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (i, p) in factors.iter().enumerate() {
            let bit = 1u64 << (n - 1 - i);
            match p {
                Pauli::I => {}
                Pauli::X => x |= bit,
                Pauli::Z => z |= bit,
                Pauli::Y => {
                    x |= bit;
                    z |= bit;
                }
            }
        }
        Ok(Self { sites: n, x, z })
    }

    /// `p` acting on the given sites, identity elsewhere.
    pub fn on_sites(sites: usize, p: Pauli, which: &[usize]) -> Result<Self> {
        let mut factors = vec![Pauli::I; sites];
        for &s in which {
            if s >= sites {
                return Err(invalid(format!("site {s} out of range for {sites} sites")));
            }
            factors[s] = p;
        }
        Self::new(&factors)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn factors(&self) -> Vec<Pauli> {
        (0..self.sites)
            .map(|i| {
                let bit = 1u64 << (self.sites - 1 - i);
                match (self.x & bit != 0, self.z & bit != 0) {
                    (false, false) => Pauli::I,
                    (true, false) => Pauli::X,
                    (false, true) => Pauli::Z,
                    (true, true) => Pauli::Y,
                }
            })
            .collect()
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Phase picked up by basis state `b`: P|b⟩ = phase(b)|b ⊕ x⟩.
    #[inline]
    pub(crate) fn phase(&self, b: usize) -> C64 {
        let ny = (self.x & self.z).count_ones() % 4;
        let base = match ny {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        if (b as u64 & self.z).count_ones() % 2 == 1 {
            -base
        } else {
            base
        }
    }

    pub(crate) fn kron(&self, other: &PauliString) -> PauliString {
        PauliString {
            sites: self.sites + other.sites,
            x: (self.x << other.sites) | other.x,
            z: (self.z << other.sites) | other.z,
        }
    }
}

impl std::str::FromStr for PauliString {
    type Err = crate::error::QslError;

    /// Letters I, X, Y, Z (any case), leftmost letter is site 0.
    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(invalid(format!("unknown Pauli factor {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&factors)
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for p in self.factors() {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Real linear combination of Pauli strings on a fixed number of sites.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    sites: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(sites: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        if sites == 0 {
            return Err(invalid("Pauli sum needs at least one site"));
        }
        for (c, s) in &terms {
            if s.sites != sites {
                return Err(invalid(format!(
                    "Pauli string on {} sites in a sum over {sites}",
                    s.sites
                )));
            }
            if !c.is_finite() {
                return Err(invalid("Pauli coefficients must be finite"));
            }
        }
        Ok(Self { sites, terms })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        1usize << self.sites
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_x_type(&self) -> bool {
        self.terms.iter().all(|(_, s)| s.z == 0)
    }

    pub fn is_z_type(&self) -> bool {
        self.terms.iter().all(|(_, s)| s.x == 0)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for (c, s) in &self.terms {
            let x = s.x as usize;
            for (b, &amp) in v.iter().enumerate() {
                out[b ^ x] += amp * s.phase(b) * *c;
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (c, s) in &self.terms {
            let x = s.x as usize;
            for b in 0..d {
                m[(b ^ x, b)] += s.phase(b) * *c;
            }
        }
        m
    }

    /// Eigenvalue of each diagonal entry for a sum of Z/I strings.
    pub(crate) fn z_diagonal(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|b| {
                self.terms
                    .iter()
                    .map(|(c, s)| if (b as u64 & s.z).count_ones() % 2 == 1 { -c } else { *c })
                    .sum()
            })
            .collect()
    }

    /// Eigenvalues in the Hadamard basis for a sum of X/I strings.
    pub(crate) fn x_spectrum(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                self.terms
                    .iter()
                    .map(|(c, s)| if (k as u64 & s.x).count_ones() % 2 == 1 { -c } else { *c })
                    .sum()
            })
            .collect()
    }

    pub(crate) fn kron(&self, other: &PauliSum) -> PauliSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, sa) in &self.terms {
            for (cb, sb) in &other.terms {
                terms.push((ca * cb, sa.kron(sb)));
            }
        }
        PauliSum { sites: self.sites + other.sites, terms }
    }
}

/// In-place unnormalized Walsh–Hadamard transform.
pub(crate) fn walsh_hadamard(v: &mut [C64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let a = v[j];
                let b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

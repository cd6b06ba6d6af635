use super::closed_form::{binomial, cpow};
use super::{OverlapData, SpinChainModel};
use crate::error::{invalid, Result};
use crate::quantum::{Pauli, PauliString, PauliSum, C64};

/// Sites of each interaction block on a periodic chain of `m` spins.
///
/// Layer one tiles the chain with contiguous blocks of `k`; layer two is the
/// same tiling shifted by k/2, so every spin sits in exactly two blocks.
pub fn block_layout(m: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    if k < 2 || !k.is_multiple_of(2) || !m.is_multiple_of(k) || k >= m {
        return Err(invalid(format!("no staggered layout for M={m}, K={k}")));
    }
    let per_layer = m / k;
    let mut blocks = Vec::with_capacity(2 * per_layer);
    for shift in [0, k / 2] {
        for j in 0..per_layer {
            blocks.push((0..k).map(|r| (j * k + shift + r) % m).collect());
        }
    }
    Ok(blocks)
}

pub(super) fn strings(s: &SpinChainModel) -> Result<Vec<PauliString>> {
    block_layout(s.m, s.k)?
        .iter()
        .map(|b| PauliString::on_sites(s.m, Pauli::X, b))
        .collect()
}

/// H = Σ ħω₀(1 − σx^i) + Σ ħω(1 − S_j) as a Pauli sum.
pub(super) fn hamiltonian(s: &SpinChainModel) -> Result<PauliSum> {
    let c = s.consts;
    let identity = PauliString::new(&vec![Pauli::I; s.m])?;
    let mut terms = vec![(c.hbar * (s.m as f64 * c.omega0 + s.q as f64 * c.omega), identity)];
    if c.omega0 > 0.0 {
        for i in 0..s.m {
            terms.push((-c.hbar * c.omega0, PauliString::on_sites(s.m, Pauli::X, &[i])?));
        }
    }
    for string in strings(s)? {
        terms.push((-c.hbar * c.omega, string));
    }
    PauliSum::new(s.m, terms)
}

fn trig(wt: f64) -> (C64, C64) {
    let (s, c) = wt.sin_cos();
    (C64::new(c, 0.0), C64::new(0.0, s))
}

/// cos^Q + (i sin)^Q.
fn p_factor(q: usize, c: C64, is: C64) -> C64 {
    cpow(c, q) + cpow(is, q)
}

pub(super) fn overlap_data(q: usize, wt: f64, hw: f64) -> OverlapData {
    let (c, is) = trig(wt);
    let p = p_factor(q, c, is);
    let phase = C64::from_polar(1.0, -(q as f64) * wt);
    let cross = is * cpow(c, q - 1) + c * cpow(is, q - 1);
    let infidelity = 0.5
        * (1..q)
            .map(|k| binomial(q, k) * (cpow(c, q - k) * cpow(is, k) + cpow(c, k) * cpow(is, q - k)).norm_sqr())
            .sum::<f64>();
    OverlapData {
        overlap: phase * p,
        infidelity: infidelity.clamp(0.0, 1.0),
        h_overlap: phase * (p - cross) * (hw * q as f64),
    }
}

/// κ = −ħωQ·conj(cos^Q + (i sin)^Q), so that the connected part
/// ⟨AH⟩ − ⟨A⟩⟨H⟩ equals κ·[cos·(i sin)^{Q−1} + i sin·cos^{Q−1}].
pub(super) fn kappa(q: usize, wt: f64, hw: f64) -> C64 {
    let (c, is) = trig(wt);
    -p_factor(q, c, is).conj() * (hw * q as f64)
}

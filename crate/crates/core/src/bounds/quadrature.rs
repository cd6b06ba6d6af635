//! Cumulative Simpson quadrature of R(t).
//!
//! Each grid step is cut into equal panels with a midpoint node. Panels are
//! split at roots of d⟨A⟩/dt, where the adaptive sign flips and where |f|
//! touches zero, and at degenerate midpoints. Values at split points and at
//! degenerate nodes are one-sided limits taken from inside the piece.

use rayon::prelude::*;

use super::evaluator::{Evaluator, Snapshot};
use super::SignMode;
use crate::error::{invalid, QslError, Result};

/// Offset of one-sided limits, as a fraction of the reference period.
pub const LIMIT_OFFSET: f64 = 1e-6;

/// Largest tolerated fraction of degenerate quadrature nodes.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.05;

const MAX_DEPTH: usize = 8;
const TINY: f64 = 1e-13;

#[derive(Debug, Clone, Copy)]
struct Side {
    r: f64,
    trend: i8,
}

/// Cumulative ∫₀ᵀ R dt at each requested time plus the node snapshots there.
#[derive(Debug, Clone)]
pub(crate) struct Cumulative {
    pub integrals: Vec<f64>,
    pub at_times: Vec<Snapshot>,
    pub degenerate_nodes: usize,
    pub total_nodes: usize,
}

struct Ctx<'a> {
    ev: &'a Evaluator,
    mode: SignMode,
    dh: f64,
    eps: f64,
}

impl Ctx<'_> {
    fn side(&self, s: &Snapshot) -> Side {
        Side { r: s.r(self.mode, self.dh), trend: s.trend() }
    }

    /// Value of R approaching `t` from direction `dir`, probing at most `room` away.
    fn limit(&self, t: f64, dir: f64, room: f64) -> Result<Side> {
        let mut off = self.eps.min(room / 4.0);
        while off <= room / 2.0 + TINY {
            let tt = t + dir * off;
            if tt >= 0.0 {
                let s = self.ev.snapshot(tt)?;
                if s.is_usable_limit(self.dh) {
                    let near = self.side(&s);
                    // first-order Richardson step towards the limit
                    let t2 = t + dir * 2.0 * off;
                    if 2.0 * off <= room && t2 >= 0.0 {
                        let s2 = self.ev.snapshot(t2)?;
                        if s2.is_usable_limit(self.dh) {
                            let far = self.side(&s2);
                            if far.trend == near.trend {
                                return Ok(Side { r: 2.0 * near.r - far.r, trend: near.trend });
                            }
                        }
                    }
                    return Ok(near);
                }
            }
            off *= 10.0;
        }
        Err(QslError::NoLimit(t))
    }

    fn value_at(&self, s: &Snapshot, dir: f64, room: f64) -> Result<Side> {
        if s.is_degenerate() {
            self.limit(s.t, dir, room)
        } else {
            Ok(self.side(s))
        }
    }

    fn panel(&self, sa: &Snapshot, sm: &Snapshot, sb: &Snapshot) -> Result<f64> {
        let (a, b) = (sa.t, sb.t);
        let va = self.value_at(sa, 1.0, b - a)?;
        let vb = self.value_at(sb, -1.0, b - a)?;
        self.piece(a, b, va, vb, Some(*sm), 0)
    }

    fn piece(&self, a: f64, b: f64, va: Side, vb: Side, mid: Option<Snapshot>, depth: usize) -> Result<f64> {
        let w = b - a;
        if w <= TINY * b.abs().max(1.0) {
            return Ok(0.5 * w * (va.r + vb.r));
        }
        let m = 0.5 * (a + b);
        let sm = match mid {
            Some(s) => s,
            None => self.ev.snapshot(m)?,
        };
        if depth >= MAX_DEPTH {
            let vm = self.value_at(&sm, 1.0, w)?;
            return Ok(w / 6.0 * (va.r + 4.0 * vm.r + vb.r));
        }
        if sm.is_degenerate() {
            return self.split(a, b, m, va, vb, depth);
        }
        let vm = self.side(&sm);
        let root = if va.trend * vm.trend < 0 {
            Some(self.bisect(a, m, va.trend)?)
        } else if vm.trend * vb.trend < 0 {
            Some(self.bisect(m, b, vm.trend)?)
        } else if vm.trend == 0 && va.trend * vb.trend < 0 {
            Some(m)
        } else {
            None
        };
        match root {
            Some(t) => self.split(a, b, t, va, vb, depth),
            None => Ok(w / 6.0 * (va.r + 4.0 * vm.r + vb.r)),
        }
    }

    /// Splits [a, b] at `t`, evaluating R on each side of `t` as a one-sided value.
    fn split(&self, a: f64, b: f64, t: f64, va: Side, vb: Side, depth: usize) -> Result<f64> {
        let st = self.ev.snapshot(t)?;
        let mut total = 0.0;
        if t - a > TINY * t.abs().max(1.0) {
            let left = self.one_sided(&st, a, -1.0, va.trend)?;
            total += self.piece(a, t, va, left, None, depth + 1)?;
        }
        if b - t > TINY * t.abs().max(1.0) {
            let right = self.one_sided(&st, b, 1.0, vb.trend)?;
            total += self.piece(t, b, right, vb, None, depth + 1)?;
        }
        Ok(total)
    }

    fn one_sided(&self, st: &Snapshot, end: f64, dir: f64, trend: i8) -> Result<Side> {
        if st.is_degenerate() {
            self.limit(st.t, dir, (end - st.t).abs())
        } else {
            Ok(Side { r: st.r_with(self.mode.sign_for(trend), self.dh), trend })
        }
    }

    /// Root of d⟨A⟩/dt in [lo, hi] given the trend at `lo`.
    fn bisect(&self, mut lo: f64, mut hi: f64, lo_trend: i8) -> Result<f64> {
        for _ in 0..200 {
            if hi - lo <= 1e-14 * hi.abs().max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let tr = self.ev.snapshot(mid)?.trend();
            if tr == 0 {
                return Ok(mid);
            }
            if tr == lo_trend {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Panels covering [0, times.last()], with the panel index reached at each time.
fn panel_layout(times: &[f64], panels_per_step: usize) -> (Vec<f64>, Vec<usize>) {
    let mut edges = vec![0.0];
    let mut marks = Vec::with_capacity(times.len());
    let step = if times.len() > 1 { times[1] - times[0] } else { times[0] };
    let mut prev = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if t > prev {
            let n = if i == 0 && step > 0.0 {
                panels_per_step * ((t - prev) / step - 1e-9).ceil().max(1.0) as usize
            } else {
                panels_per_step
            };
            for k in 1..=n {
                edges.push(if k == n { t } else { prev + (t - prev) * k as f64 / n as f64 });
            }
            prev = t;
        }
        marks.push(edges.len() - 1);
    }
    (edges, marks)
}

pub(crate) fn cumulative(
    ev: &Evaluator,
    times: &[f64],
    panels_per_step: usize,
    mode: SignMode,
) -> Result<Cumulative> {
    if times.is_empty() {
        return Err(QslError::Empty("time grid"));
    }
    if panels_per_step == 0 {
        return Err(invalid("panels per step must be positive"));
    }
    if times[0] < 0.0 || times.windows(2).any(|w| !(w[1] >= w[0])) || times.iter().any(|t| !t.is_finite()) {
        return Err(invalid("times must be finite, non-negative and sorted"));
    }
    let (edges, marks) = panel_layout(times, panels_per_step);
    let nodes: Vec<f64> = (0..2 * edges.len() - 1)
        .map(|i| if i % 2 == 0 { edges[i / 2] } else { 0.5 * (edges[i / 2] + edges[i / 2 + 1]) })
        .collect();
    let snaps: Vec<Snapshot> = nodes.par_iter().map(|&t| ev.snapshot(t)).collect::<Result<_>>()?;
    let degenerate = snaps.iter().filter(|s| s.is_degenerate()).count();
    let total = snaps.len();
    if edges.len() > 1 && degenerate as f64 > MAX_DEGENERATE_FRACTION * total as f64 {
        return Err(QslError::TooManyDegenerate { degenerate, total });
    }
    let ctx = Ctx {
        ev,
        mode,
        dh: ev.energy_spread(),
        eps: LIMIT_OFFSET * ev.period(),
    };
    let panels: Vec<f64> = (0..edges.len() - 1)
        .into_par_iter()
        .map(|p| ctx.panel(&snaps[2 * p], &snaps[2 * p + 1], &snaps[2 * p + 2]))
        .collect::<Result<_>>()?;
    let mut running = Vec::with_capacity(panels.len() + 1);
    let mut acc = 0.0;
    running.push(0.0);
    for v in &panels {
        acc += v;
        running.push(acc);
    }
    Ok(Cumulative {
        integrals: marks.iter().map(|&k| running[k]).collect(),
        at_times: marks.iter().map(|&k| snaps[2 * k]).collect(),
        degenerate_nodes: degenerate,
        total_nodes: total,
    })
}

/// R(t) at `t`, replaced by the right-hand limit where the state is degenerate.
pub(crate) fn r_value(ev: &Evaluator, t: f64, mode: SignMode) -> Result<(f64, bool)> {
    let s = ev.snapshot(t)?;
    let ctx = Ctx { ev, mode, dh: ev.energy_spread(), eps: LIMIT_OFFSET * ev.period() };
    if s.is_degenerate() {
        let room = 1e-2 * ev.period();
        let v = ctx.limit(t, 1.0, room).or_else(|_| ctx.limit(t, -1.0, room.min(t)))?;
        Ok((v.r, true))
    } else {
        Ok((ctx.side(&s).r, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_hits_every_time() {
        let times = [0.0, 0.5, 1.0, 1.5];
        let (edges, marks) = panel_layout(&times, 3);
        assert_eq!(edges.len(), 10);
        for (t, k) in times.iter().zip(&marks) {
            assert_eq!(edges[*k], *t);
        }
        let times = [0.25, 0.5, 0.75];
        let (edges, marks) = panel_layout(&times, 2);
        assert_eq!(marks, vec![2, 4, 6]);
        assert_eq!(edges[2], 0.25);
    }
}

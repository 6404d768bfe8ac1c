//! Plot-ready sweeps of the interaction: barycentric grid scans and exact
//! ray scans with breakpoint enumeration.
//!
//! Along a ray b(t) = origin + t*direction the interaction and both forces
//! are piecewise linear in t: every quantity is a signed sum of terms
//! `max_a <w, b(t)>` with w built from rewards and kernel rows, and each
//! such term is the upper envelope of affine functions of t. Breakpoints are
//! therefore found exactly — solve the pairwise line equalities, keep the
//! roots where some envelope's argmax pattern actually changes — and zero
//! crossings of the interaction are solved in closed form inside segments.
//! No numeric root-finding anywhere.
//!
//! Every ray scan re-evaluates the interaction from scratch at each segment
//! midpoint and fails loudly if the segment coefficients disagree, so a
//! returned scan is self-certified against the pointwise implementation.

use std::collections::BTreeSet;
use std::io::{self, Write};

use crate::error::EvalError;
use crate::interaction::delta_voi;
use crate::localization::Regime;
use crate::model::{Belief, Channel, DecisionProblem};
use crate::rational::Rational;
use crate::value::value;

/// Significant digits used for the decimal convenience columns in CSV
/// output. The fraction columns remain the source of truth.
pub const CSV_DECIMAL_DIGITS: usize = 12;

/// One lattice point of a grid scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridRow {
    /// Barycentric integer coordinates; the belief is `coords / denominator`.
    pub coords: Vec<u32>,
    pub belief: Belief,
    pub delta_voi: Rational,
    pub complement_force: Rational,
    pub substitute_force: Rational,
    pub regime: Regime,
    pub argmax_actions: Vec<usize>,
    pub on_kink: bool,
}

/// The interaction evaluated at every barycentric lattice point k/N of the
/// simplex, in lexicographic coordinate order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridScan {
    pub denominator: u32,
    pub action_names: Vec<String>,
    pub rows: Vec<GridRow>,
}

/// Affine function of the ray parameter: `value(t) = intercept + slope * t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn eval(&self, t: &Rational) -> Rational {
        &self.intercept + &(&self.slope * t)
    }

    fn zero() -> Affine {
        Affine {
            slope: Rational::zero(),
            intercept: Rational::zero(),
        }
    }

    fn add(&mut self, other: &Affine) {
        self.slope += &other.slope;
        self.intercept += &other.intercept;
    }

    fn sub(&mut self, other: &Affine) {
        self.slope -= &other.slope;
        self.intercept -= &other.intercept;
    }
}

/// What sits at the upper end of a ray segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// An argmax pattern change that is neither of the two below.
    Kink,
    /// The optimal action set of V changes (a decision boundary).
    Decision,
    /// The interaction crosses zero with a sign change.
    Interaction,
    /// Both at the same parameter value.
    InteractionAndDecision,
    /// The end of the scanned range.
    End,
}

impl BoundaryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryKind::Kink => "kink",
            BoundaryKind::Decision => "decision",
            BoundaryKind::Interaction => "interaction",
            BoundaryKind::InteractionAndDecision => "interaction+decision",
            BoundaryKind::End => "end",
        }
    }
}

/// A maximal interval on which the interaction and both forces are affine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RaySegment {
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub delta_voi: Affine,
    pub complement_force: Affine,
    pub substitute_force: Affine,
    pub boundary_kind_at_hi: BoundaryKind,
}

/// An exact piecewise-linear scan of the interaction along a ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayScan {
    pub origin: Belief,
    pub direction: Vec<Rational>,
    pub t_max: Rational,
    /// Parameter values where some envelope's argmax pattern changes.
    pub breakpoints: Vec<Rational>,
    pub segments: Vec<RaySegment>,
    /// Parameter values where the optimal action set of V changes.
    pub decision_boundary_ts: Vec<Rational>,
    /// Parameter values where the interaction is zero with a sign change.
    pub interaction_crossings: Vec<Rational>,
}

fn check_channel(prob: &DecisionProblem, ch: &Channel) -> Result<(), EvalError> {
    if ch.num_states() != prob.num_states() {
        return Err(EvalError::Dimension(format!(
            "channel `{}` has {} states, problem has {}",
            ch.name(),
            ch.num_states(),
            prob.num_states()
        )));
    }
    Ok(())
}

/// Evaluates the interaction at every lattice point (k_1/N, ..., k_K/N),
/// k_i >= 0 summing to N, in lexicographic order of the coordinates.
pub fn grid_scan(
    prob: &DecisionProblem,
    ch_i: &Channel,
    ch_j: &Channel,
    n: u32,
) -> Result<GridScan, EvalError> {
    if n == 0 {
        return Err(EvalError::InvalidScan(
            "grid denominator must be at least 1".to_string(),
        ));
    }
    check_channel(prob, ch_i)?;
    check_channel(prob, ch_j)?;
    let k = prob.num_states();
    let denom = num_bigint::BigInt::from(n);
    let mut rows = Vec::new();
    let mut coords = vec![0u32; k];
    enumerate_lattice(&mut coords, 0, n, &mut |coords| {
        let probs = coords
            .iter()
            .map(|&c| {
                Rational::new(num_bigint::BigInt::from(c), denom.clone())
                    .expect("positive denominator")
            })
            .collect();
        let belief = Belief::new(probs).expect("lattice point sums to 1");
        let report = delta_voi(prob, ch_i, ch_j, &belief)?;
        let v = value(prob, &belief)?;
        rows.push(GridRow {
            coords: coords.to_vec(),
            belief,
            regime: Regime::from_delta(&report.delta_voi),
            delta_voi: report.delta_voi,
            complement_force: report.complement_force,
            substitute_force: report.substitute_force,
            argmax_actions: v.argmax_actions,
            on_kink: report.prior_on_kink,
        });
        Ok(())
    })?;
    Ok(GridScan {
        denominator: n,
        action_names: prob.action_names().to_vec(),
        rows,
    })
}

fn enumerate_lattice(
    coords: &mut Vec<u32>,
    idx: usize,
    remaining: u32,
    visit: &mut impl FnMut(&[u32]) -> Result<(), EvalError>,
) -> Result<(), EvalError> {
    if idx + 1 == coords.len() {
        coords[idx] = remaining;
        return visit(coords);
    }
    for v in 0..=remaining {
        coords[idx] = v;
        enumerate_lattice(coords, idx + 1, remaining - v, visit)?;
    }
    Ok(())
}

/// One `max_a` envelope restricted to the ray: an affine function per action.
struct Envelope {
    lines: Vec<Affine>,
}

impl Envelope {
    /// Builds the envelope of `max_a <r_a (.) weights, b(t)>` where `weights`
    /// multiplies the reward rows entrywise (a kernel row, or all-ones for V).
    fn new(
        prob: &DecisionProblem,
        weights: &[Rational],
        origin: &Belief,
        direction: &[Rational],
    ) -> Envelope {
        let lines = (0..prob.num_actions())
            .map(|a| {
                let row = prob.reward_row(a);
                let mut intercept = Rational::zero();
                let mut slope = Rational::zero();
                for s in 0..origin.dim() {
                    let c = &row[s] * &weights[s];
                    intercept += &(&c * &origin[s]);
                    slope += &(&c * &direction[s]);
                }
                Affine { slope, intercept }
            })
            .collect();
        Envelope { lines }
    }

    /// The set of maximizing line indices at t, ascending.
    fn argmax_at(&self, t: &Rational) -> Vec<usize> {
        let values: Vec<Rational> = self.lines.iter().map(|l| l.eval(t)).collect();
        let best = values.iter().max().expect("nonempty").clone();
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == best)
            .map(|(a, _)| a)
            .collect()
    }

    /// All t in (0, t_max) where two lines intersect.
    fn candidate_ts(&self, t_max: &Rational, out: &mut BTreeSet<Rational>) {
        for a in 0..self.lines.len() {
            for b in a + 1..self.lines.len() {
                let la = &self.lines[a];
                let lb = &self.lines[b];
                if la.slope == lb.slope {
                    continue;
                }
                let t = (&lb.intercept - &la.intercept) / (&la.slope - &lb.slope);
                if t.is_positive() && t < *t_max {
                    out.insert(t);
                }
            }
        }
    }
}

/// Scans the interaction along `b(t) = origin + t * direction` for
/// t in [0, t_max], locating breakpoints, decision boundaries, and zero
/// crossings exactly.
pub fn ray_scan(
    prob: &DecisionProblem,
    ch_i: &Channel,
    ch_j: &Channel,
    origin: &Belief,
    direction: &[Rational],
    t_max: &Rational,
) -> Result<RayScan, EvalError> {
    check_channel(prob, ch_i)?;
    check_channel(prob, ch_j)?;
    if origin.dim() != prob.num_states() {
        return Err(EvalError::Dimension(format!(
            "origin has {} states, problem has {}",
            origin.dim(),
            prob.num_states()
        )));
    }
    if direction.len() != origin.dim() {
        return Err(EvalError::InvalidScan(format!(
            "direction has {} entries, expected {}",
            direction.len(),
            origin.dim()
        )));
    }
    if direction.iter().all(Rational::is_zero) {
        return Err(EvalError::InvalidScan("zero direction".to_string()));
    }
    let dir_sum: Rational = direction.iter().sum();
    if !dir_sum.is_zero() {
        return Err(EvalError::InvalidScan(format!(
            "direction entries sum to {dir_sum}, expected 0"
        )));
    }
    if t_max.is_negative() {
        return Err(EvalError::InvalidScan(format!(
            "t_max = {t_max} is negative"
        )));
    }
    for (s, d) in direction.iter().enumerate() {
        let end = &origin[s] + &(d * t_max);
        if end.is_negative() {
            return Err(EvalError::InvalidScan(format!(
                "ray exits the simplex: coordinate {s} is {end} at t_max = {t_max}"
            )));
        }
    }

    let belief_at = |t: &Rational| -> Belief {
        let probs = (0..origin.dim())
            .map(|s| &origin[s] + &(&direction[s] * t))
            .collect();
        Belief::new(probs).expect("ray stays in the simplex")
    };

    if t_max.is_zero() {
        let report = delta_voi(prob, ch_i, ch_j, origin)?;
        let point = |v: Rational| Affine {
            slope: Rational::zero(),
            intercept: v,
        };
        return Ok(RayScan {
            origin: origin.clone(),
            direction: direction.to_vec(),
            t_max: t_max.clone(),
            breakpoints: Vec::new(),
            segments: vec![RaySegment {
                t_lo: Rational::zero(),
                t_hi: Rational::zero(),
                delta_voi: point(report.delta_voi),
                complement_force: point(report.complement_force),
                substitute_force: point(report.substitute_force),
                boundary_kind_at_hi: BoundaryKind::End,
            }],
            decision_boundary_ts: Vec::new(),
            interaction_crossings: Vec::new(),
        });
    }

    // The four envelope families of the unnormalized-value expansion:
    // V, one term per outcome of i, of j, and of the joint channel.
    let all_ones = vec![Rational::one(); origin.dim()];
    let mut envelopes = Vec::new();
    envelopes.push(Envelope::new(prob, &all_ones, origin, direction));
    let fi_start = envelopes.len();
    for o in 0..ch_i.num_outcomes() {
        envelopes.push(Envelope::new(prob, ch_i.outcome_row(o), origin, direction));
    }
    let fj_start = envelopes.len();
    for o in 0..ch_j.num_outcomes() {
        envelopes.push(Envelope::new(prob, ch_j.outcome_row(o), origin, direction));
    }
    let fij_start = envelopes.len();
    for oi in 0..ch_i.num_outcomes() {
        for oj in 0..ch_j.num_outcomes() {
            let weights: Vec<Rational> = (0..origin.dim())
                .map(|s| ch_i.prob(oi, s) * ch_j.prob(oj, s))
                .collect();
            envelopes.push(Envelope::new(prob, &weights, origin, direction));
        }
    }

    let mut candidates = BTreeSet::new();
    for env in &envelopes {
        env.candidate_ts(t_max, &mut candidates);
    }
    let candidates: Vec<Rational> = candidates.into_iter().collect();

    // Interval skeleton and the argmax pattern of every envelope inside each
    // interval (patterns are constant between consecutive candidates).
    let mut points = Vec::with_capacity(candidates.len() + 2);
    points.push(Rational::zero());
    points.extend(candidates.iter().cloned());
    points.push(t_max.clone());
    let half = Rational::from_ratio(1, 2);
    let midpoints: Vec<Rational> = points.windows(2).map(|w| (&w[0] + &w[1]) * &half).collect();
    let patterns: Vec<Vec<Vec<usize>>> = midpoints
        .iter()
        .map(|tm| envelopes.iter().map(|env| env.argmax_at(tm)).collect())
        .collect();

    let breakpoints: Vec<Rational> = candidates
        .iter()
        .enumerate()
        .filter(|(idx, _)| patterns[*idx] != patterns[idx + 1])
        .map(|(_, t)| t.clone())
        .collect();

    // Decision boundaries: points where the argmax of V differs from the
    // pattern on an adjacent interval (covers both transversal crossings and
    // tangential touches).
    let mut decision_boundary_ts = Vec::new();
    for (p_idx, p) in points.iter().enumerate() {
        let at_point = envelopes[0].argmax_at(p);
        let differs_left = p_idx > 0 && patterns[p_idx - 1][0] != at_point;
        let differs_right = p_idx < patterns.len() && patterns[p_idx][0] != at_point;
        if differs_left || differs_right {
            decision_boundary_ts.push(p.clone());
        }
    }

    // Merge intervals between true breakpoints and attach coefficients.
    struct Piece {
        t_lo: Rational,
        t_hi: Rational,
        dvoi: Affine,
        comp: Affine,
        sub: Affine,
    }
    let coefficients = |pattern: &[Vec<usize>]| -> (Affine, Affine, Affine) {
        // Representative action per envelope; any maximizer yields the same
        // affine function on the interval.
        let term = |idx: usize| -> &Affine { &envelopes[idx].lines[pattern[idx][0]] };
        let mut f_i = Affine::zero();
        for idx in fi_start..fj_start {
            f_i.add(term(idx));
        }
        let mut f_j = Affine::zero();
        for idx in fj_start..fij_start {
            f_j.add(term(idx));
        }
        let mut f_ij = Affine::zero();
        for idx in fij_start..envelopes.len() {
            f_ij.add(term(idx));
        }
        let v = term(0);
        // dVoI = F_ij - F_i - F_j + V; comp = F_ij - F_j; sub = F_i - V.
        let mut dvoi = f_ij.clone();
        dvoi.sub(&f_i);
        dvoi.sub(&f_j);
        dvoi.add(v);
        let mut comp = f_ij;
        comp.sub(&f_j);
        let mut sub = f_i;
        sub.sub(v);
        (dvoi, comp, sub)
    };

    let mut pieces: Vec<Piece> = Vec::new();
    let mut seg_start = 0usize;
    for interval in 0..midpoints.len() {
        let is_last = interval + 1 == midpoints.len();
        let ends_at_breakpoint = !is_last && patterns[interval] != patterns[interval + 1];
        if ends_at_breakpoint || is_last {
            let (dvoi, comp, sub) = coefficients(&patterns[seg_start]);
            pieces.push(Piece {
                t_lo: points[seg_start].clone(),
                t_hi: points[interval + 1].clone(),
                dvoi,
                comp,
                sub,
            });
            seg_start = interval + 1;
        }
    }

    // Self-certification: segment coefficients must reproduce an independent
    // pointwise evaluation at each segment midpoint.
    for piece in &pieces {
        let tm = (&piece.t_lo + &piece.t_hi) * &half;
        let report = delta_voi(prob, ch_i, ch_j, &belief_at(&tm))?;
        if piece.dvoi.eval(&tm) != report.delta_voi
            || piece.comp.eval(&tm) != report.complement_force
            || piece.sub.eval(&tm) != report.substitute_force
        {
            return Err(EvalError::Internal(format!(
                "segment [{}, {}] coefficients disagree with pointwise evaluation at t = {tm}",
                piece.t_lo, piece.t_hi
            )));
        }
    }

    // Split segments at interior zero crossings of the interaction so every
    // crossing sits on a segment boundary.
    let mut split: Vec<Piece> = Vec::new();
    for piece in pieces {
        let v_lo = piece.dvoi.eval(&piece.t_lo);
        let v_hi = piece.dvoi.eval(&piece.t_hi);
        if v_lo.signum() * v_hi.signum() < 0 {
            let root = -&piece.dvoi.intercept / &piece.dvoi.slope;
            debug_assert!(piece.t_lo < root && root < piece.t_hi);
            split.push(Piece {
                t_lo: piece.t_lo.clone(),
                t_hi: root.clone(),
                dvoi: piece.dvoi.clone(),
                comp: piece.comp.clone(),
                sub: piece.sub.clone(),
            });
            split.push(Piece {
                t_lo: root,
                ..piece
            });
        } else {
            split.push(piece);
        }
    }

    // A crossing is a boundary point where the interaction is exactly zero
    // and the signs on the two adjacent segments differ strictly.
    let mut interaction_crossings = Vec::new();
    for k in 1..split.len() {
        let p = &split[k].t_lo;
        if !split[k].dvoi.eval(p).is_zero() {
            continue;
        }
        let left_sign = split[k - 1].dvoi.eval(&split[k - 1].t_lo).signum();
        let right_sign = split[k].dvoi.eval(&split[k].t_hi).signum();
        if left_sign * right_sign < 0 {
            interaction_crossings.push(p.clone());
        }
    }

    let last = split.len() - 1;
    let segments = split
        .into_iter()
        .enumerate()
        .map(|(idx, piece)| {
            let kind = if idx == last {
                BoundaryKind::End
            } else {
                let crossing = interaction_crossings.contains(&piece.t_hi);
                let decision = decision_boundary_ts.contains(&piece.t_hi);
                match (crossing, decision) {
                    (true, true) => BoundaryKind::InteractionAndDecision,
                    (true, false) => BoundaryKind::Interaction,
                    (false, true) => BoundaryKind::Decision,
                    (false, false) => BoundaryKind::Kink,
                }
            };
            RaySegment {
                t_lo: piece.t_lo,
                t_hi: piece.t_hi,
                delta_voi: piece.dvoi,
                complement_force: piece.comp,
                substitute_force: piece.sub,
                boundary_kind_at_hi: kind,
            }
        })
        .collect();

    Ok(RayScan {
        origin: origin.clone(),
        direction: direction.to_vec(),
        t_max: t_max.clone(),
        breakpoints,
        segments,
        decision_boundary_ts,
        interaction_crossings,
    })
}

/// Writes the grid CSV: fraction and 12-digit decimal columns per belief
/// coordinate and per quantity, then regime, argmax actions (names joined by
/// `+`), and the kink flag. Deterministic bytes for a fixed scan.
pub fn write_grid_csv<W: Write>(scan: &GridScan, mut w: W) -> io::Result<()> {
    let k = scan.rows.first().map_or(0, |r| r.belief.dim());
    let mut header = String::new();
    for s in 0..k {
        header.push_str(&format!("b{}_frac,", s + 1));
    }
    for s in 0..k {
        header.push_str(&format!("b{}_dec,", s + 1));
    }
    header.push_str(
        "delta_voi_frac,delta_voi_dec,comp_force_frac,comp_force_dec,\
         sub_force_frac,sub_force_dec,regime,argmax_actions,on_kink",
    );
    writeln!(w, "{header}")?;
    for row in &scan.rows {
        let mut line = String::new();
        for p in row.belief.iter() {
            line.push_str(&p.to_fraction_string());
            line.push(',');
        }
        for p in row.belief.iter() {
            line.push_str(&p.to_decimal_string(CSV_DECIMAL_DIGITS));
            line.push(',');
        }
        for q in [&row.delta_voi, &row.complement_force, &row.substitute_force] {
            line.push_str(&q.to_fraction_string());
            line.push(',');
            line.push_str(&q.to_decimal_string(CSV_DECIMAL_DIGITS));
            line.push(',');
        }
        line.push_str(row.regime.as_str());
        line.push(',');
        let names: Vec<&str> = row
            .argmax_actions
            .iter()
            .map(|&a| scan.action_names[a].as_str())
            .collect();
        line.push_str(&names.join("+"));
        line.push(',');
        line.push_str(if row.on_kink { "true" } else { "false" });
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes the ray CSV: one row per segment with exact affine coefficients
/// and the boundary kind at the segment's upper end.
pub fn write_ray_csv<W: Write>(scan: &RayScan, mut w: W) -> io::Result<()> {
    writeln!(
        w,
        "t_lo_frac,t_hi_frac,dvoi_slope_frac,dvoi_intercept_frac,\
         comp_slope_frac,comp_intercept_frac,sub_slope_frac,sub_intercept_frac,\
         boundary_kind_at_hi"
    )?;
    for seg in &scan.segments {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            seg.t_lo.to_fraction_string(),
            seg.t_hi.to_fraction_string(),
            seg.delta_voi.slope.to_fraction_string(),
            seg.delta_voi.intercept.to_fraction_string(),
            seg.complement_force.slope.to_fraction_string(),
            seg.complement_force.intercept.to_fraction_string(),
            seg.substitute_force.slope.to_fraction_string(),
            seg.substitute_force.intercept.to_fraction_string(),
            seg.boundary_kind_at_hi.as_str(),
        )?;
    }
    Ok(())
}

//! Beliefs over player 1's type and the non-parametric belief grid.
//!
//! Policies and values are learned at a finite set of grid beliefs and
//! queried anywhere on the simplex with inverse-squared-distance weights
//! `w(b, b_k) = 1 / max(cap, |b - b_k|_2^2)`.

use serde::{Deserialize, Serialize};

use crate::error::BeliefError;

/// Sum-to-one tolerance for a [`Belief`].
pub const BELIEF_SUM_TOL: f64 = 1e-9;
/// Queries closer than this (l2) to a grid point return that point's data verbatim.
pub const EXACT_MATCH_RADIUS: f64 = 1e-9;
/// Default lower cap on the squared distance inside a weight.
pub const DEFAULT_WEIGHT_CAP: f64 = 1e-6;
/// A Bayes update whose normalizer is at or below this value is infeasible.
pub const FEASIBILITY_TOL: f64 = 0.0;

/// A probability vector over player 1's types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Belief(Vec<f64>);

impl Belief {
    pub fn new(probs: Vec<f64>) -> Result<Self, BeliefError> {
        if probs.is_empty() {
            return Err(BeliefError::Invalid("no types".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(BeliefError::Invalid(format!("entry {p} is negative or non-finite")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > BELIEF_SUM_TOL {
            return Err(BeliefError::Invalid(format!("entries sum to {sum}")));
        }
        Ok(Belief(probs))
    }

    pub fn uniform(n_types: usize) -> Self {
        Belief(vec![1.0 / n_types as f64; n_types])
    }

    /// Point mass on `ty`.
    pub fn vertex(n_types: usize, ty: usize) -> Self {
        let mut v = vec![0.0; n_types];
        v[ty] = 1.0;
        Belief(v)
    }

    /// Two-type belief `(p, 1 - p)`.
    pub fn binary(p: f64) -> Result<Self, BeliefError> {
        Belief::new(vec![p, 1.0 - p])
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Belief(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn l1_distance(&self, other: &Belief) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum()
    }

    pub fn sq_l2_distance(&self, other: &Belief) -> f64 {
        sq_l2(&self.0, &other.0)
    }
}

#[inline]
fn sq_l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Posterior after observing an action whose per-type probabilities are
/// `likelihoods[type]`: `b'_t = likelihoods[t] b_t / sum_u likelihoods[u] b_u`.
pub fn bayes_update(b: &Belief, likelihoods: &[f64]) -> Result<Belief, BeliefError> {
    if likelihoods.len() != b.len() {
        return Err(BeliefError::Dimension {
            expected: b.len(),
            got: likelihoods.len(),
        });
    }
    if let Some(p) = likelihoods.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(BeliefError::Invalid(format!("likelihood {p} is negative or non-finite")));
    }
    bayes_update_raw(b.probs(), likelihoods).map(Belief)
}

/// [`bayes_update`] on plain slices without input validation.
pub(crate) fn bayes_update_raw(b: &[f64], likelihoods: &[f64]) -> Result<Vec<f64>, BeliefError> {
    let normalizer: f64 = b.iter().zip(likelihoods).map(|(p, l)| p * l).sum();
    if normalizer <= FEASIBILITY_TOL || !normalizer.is_finite() {
        return Err(BeliefError::Infeasible { normalizer });
    }
    Ok(b.iter()
        .zip(likelihoods)
        .map(|(p, l)| p * l / normalizer)
        .collect())
}

/// Which norm a grid density is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormTag {
    L1,
}

/// How off-grid beliefs are mapped onto grid data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Interpolation {
    /// Inverse-squared-distance weights with the given cap.
    Weighted { cap: f64 },
    /// Data of the closest grid point (lowest index on ties).
    Nearest,
}

impl Default for Interpolation {
    fn default() -> Self {
        Interpolation::Weighted {
            cap: DEFAULT_WEIGHT_CAP,
        }
    }
}

/// `K` sampled beliefs with the covering density `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefGrid {
    points: Vec<Belief>,
    density: f64,
    norm: NormTag,
}

impl BeliefGrid {
    /// Builds a grid from arbitrary points and computes its density.
    pub fn from_points(points: Vec<Belief>) -> Result<Self, BeliefError> {
        if points.is_empty() {
            return Err(BeliefError::EmptyGrid);
        }
        let m = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != m) {
            return Err(BeliefError::Dimension {
                expected: m,
                got: p.len(),
            });
        }
        let density = compute_density(&points)?;
        Ok(BeliefGrid {
            points,
            density,
            norm: NormTag::L1,
        })
    }

    pub fn points(&self) -> &[Belief] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_types(&self) -> usize {
        self.points[0].len()
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn norm(&self) -> NormTag {
        self.norm
    }

    /// Index of a grid point within [`EXACT_MATCH_RADIUS`] of `b`, if any.
    pub fn exact_match(&self, b: &[f64]) -> Option<usize> {
        let r2 = EXACT_MATCH_RADIUS * EXACT_MATCH_RADIUS;
        self.points.iter().position(|p| sq_l2(p.probs(), b) <= r2)
    }

    pub fn nearest(&self, b: &[f64]) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, p) in self.points.iter().enumerate() {
            let d = sq_l2(p.probs(), b);
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }

    /// Interpolation weights for a query belief.
    pub fn weights(&self, b: &[f64], mode: Interpolation) -> InterpWeights {
        if let Some(k) = self.exact_match(b) {
            return InterpWeights::exact(k);
        }
        match mode {
            Interpolation::Nearest => InterpWeights::exact(self.nearest(b)),
            Interpolation::Weighted { cap } => {
                let k_count = self.points.len();
                let mut w = Vec::with_capacity(k_count);
                let mut dcoef = Vec::with_capacity(k_count);
                let mut total = 0.0;
                for p in &self.points {
                    let d2 = sq_l2(p.probs(), b);
                    if d2 <= cap {
                        w.push(1.0 / cap);
                        dcoef.push(0.0);
                    } else {
                        w.push(1.0 / d2);
                        // d/db (1/d2) = -2 (b - b_k) / d2^2
                        dcoef.push(-2.0 / (d2 * d2));
                    }
                    total += w.last().unwrap();
                }
                for x in w.iter_mut() {
                    *x /= total;
                }
                for c in dcoef.iter_mut() {
                    *c /= total;
                }
                InterpWeights {
                    exact: None,
                    weights: w,
                    dcoef,
                    query: b.to_vec(),
                }
            }
        }
    }
}

/// Normalized interpolation weights for one query belief, reusable across
/// states, types and players.
#[derive(Debug, Clone)]
pub struct InterpWeights {
    exact: Option<usize>,
    weights: Vec<f64>,
    dcoef: Vec<f64>,
    query: Vec<f64>,
}

impl InterpWeights {
    fn exact(k: usize) -> Self {
        InterpWeights {
            exact: Some(k),
            weights: Vec::new(),
            dcoef: Vec::new(),
            query: Vec::new(),
        }
    }

    pub fn exact_point(&self) -> Option<usize> {
        self.exact
    }

    /// `(k, normalized weight)` pairs with non-zero weight.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let exact = self.exact.map(|k| (k, 1.0));
        exact
            .into_iter()
            .chain(self.weights.iter().copied().enumerate())
    }

    /// Interpolated scalar, where `value(k)` is the datum at grid point `k`.
    #[inline]
    pub fn value(&self, value: impl Fn(usize) -> f64) -> f64 {
        match self.exact {
            Some(k) => value(k),
            None => self.weights.iter().enumerate().map(|(k, w)| w * value(k)).sum(),
        }
    }

    /// Gradient of [`InterpWeights::value`] with respect to the query
    /// belief, written into `out`. Capped weights and exact matches are
    /// locally constant and contribute nothing.
    pub fn gradient(&self, grid: &BeliefGrid, value: impl Fn(usize) -> f64, out: &mut [f64]) {
        out.iter_mut().for_each(|g| *g = 0.0);
        if self.exact.is_some() {
            return;
        }
        let v = self.value(&value);
        for (k, &c) in self.dcoef.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let scale = c * (value(k) - v);
            for ((g, q), p) in out.iter_mut().zip(&self.query).zip(grid.points[k].probs()) {
                *g += scale * (q - p);
            }
        }
    }
}

/// `w(b, b_k) = 1 / max(cap, |b - b_k|_2^2)`.
pub fn weight(b: &Belief, b_k: &Belief, cap: f64) -> f64 {
    1.0 / cap.max(b.sq_l2_distance(b_k))
}

fn check_query(grid: &BeliefGrid, b: &Belief) -> Result<(), BeliefError> {
    if grid.is_empty() {
        return Err(BeliefError::EmptyGrid);
    }
    if b.len() != grid.n_types() {
        return Err(BeliefError::Dimension {
            expected: grid.n_types(),
            got: b.len(),
        });
    }
    Ok(())
}

/// Weight-normalized mixture of per-grid-point action distributions.
pub fn interpolate_policy(
    grid: &BeliefGrid,
    point_policies: &[Vec<f64>],
    b: &Belief,
    mode: Interpolation,
) -> Result<Vec<f64>, BeliefError> {
    check_query(grid, b)?;
    if point_policies.len() != grid.len() {
        return Err(BeliefError::Dimension {
            expected: grid.len(),
            got: point_policies.len(),
        });
    }
    let w = grid.weights(b.probs(), mode);
    if let Some(k) = w.exact_point() {
        return Ok(point_policies[k].clone());
    }
    let n = point_policies[0].len();
    let mut out = vec![0.0; n];
    for (k, wk) in w.iter() {
        for (o, p) in out.iter_mut().zip(&point_policies[k]) {
            *o += wk * p;
        }
    }
    Ok(out)
}

/// Weight-normalized mixture of per-grid-point values.
pub fn interpolate_value(
    grid: &BeliefGrid,
    point_values: &[f64],
    b: &Belief,
    mode: Interpolation,
) -> Result<f64, BeliefError> {
    check_query(grid, b)?;
    if point_values.len() != grid.len() {
        return Err(BeliefError::Dimension {
            expected: grid.len(),
            got: point_values.len(),
        });
    }
    Ok(grid.weights(b.probs(), mode).value(|k| point_values[k]))
}

/// Analytic gradient of [`interpolate_value`] with respect to each belief coordinate.
pub fn value_gradient_wrt_belief(
    grid: &BeliefGrid,
    point_values: &[f64],
    b: &Belief,
    mode: Interpolation,
) -> Result<Vec<f64>, BeliefError> {
    check_query(grid, b)?;
    if point_values.len() != grid.len() {
        return Err(BeliefError::Dimension {
            expected: grid.len(),
            got: point_values.len(),
        });
    }
    let mut g = vec![0.0; b.len()];
    grid.weights(b.probs(), mode)
        .gradient(grid, |k| point_values[k], &mut g);
    Ok(g)
}

/// Equally spaced grid: `(i/r, 1 - i/r)` for two types, the full simplex
/// lattice with denominator `r` otherwise.
pub fn grid_sample(n_types: usize, resolution: usize) -> Result<BeliefGrid, BeliefError> {
    if resolution == 0 {
        return Err(BeliefError::InvalidGrid("resolution must be at least 1".into()));
    }
    if n_types == 0 {
        return Err(BeliefError::InvalidGrid("no types".into()));
    }
    let mut points = Vec::new();
    let mut counts = vec![0usize; n_types];
    compositions(resolution, 0, &mut counts, &mut |c| {
        points.push(Belief::from_raw(
            c.iter().map(|&x| x as f64 / resolution as f64).collect(),
        ));
    });
    BeliefGrid::from_points(points)
}

fn compositions(remaining: usize, i: usize, counts: &mut [usize], emit: &mut impl FnMut(&[usize])) {
    if i + 1 == counts.len() {
        counts[i] = remaining;
        emit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[i] = c;
        compositions(remaining - c, i + 1, counts, emit);
    }
}

/// Largest l1 distance from any simplex point to its nearest grid point.
///
/// Exact for two types (any point set) and for full simplex lattices with
/// up to five types; other point sets are rejected.
pub fn compute_density(points: &[Belief]) -> Result<f64, BeliefError> {
    if points.is_empty() {
        return Err(BeliefError::EmptyGrid);
    }
    let m = points[0].len();
    match m {
        1 => Ok(0.0),
        2 => {
            let mut xs: Vec<f64> = points.iter().map(|p| p.probs()[0]).collect();
            xs.sort_by(f64::total_cmp);
            // l1 distance between (p, 1-p) and (q, 1-q) is 2|p - q|; the
            // farthest point of an interior gap sits at its midpoint.
            let mut d = (2.0 * xs[0]).max(2.0 * (1.0 - xs[xs.len() - 1]));
            for w in xs.windows(2) {
                d = d.max(w[1] - w[0]);
            }
            Ok(d)
        }
        _ => {
            let n = lattice_resolution(points).ok_or_else(|| {
                BeliefError::InvalidGrid(
                    "density is only computable for full simplex lattices beyond two types".into(),
                )
            })?;
            let mf = m as f64;
            if n == 1 {
                Ok(2.0 * (mf - 1.0) / mf)
            } else if m <= 5 {
                let lo = (m / 2) as f64;
                let hi = m.div_ceil(2) as f64;
                Ok(2.0 * lo * hi / (mf * n as f64))
            } else {
                Err(BeliefError::InvalidGrid(format!(
                    "lattice density for {m} types is not supported"
                )))
            }
        }
    }
}

/// Resolution `r` if `points` is exactly the simplex lattice with denominator `r`.
fn lattice_resolution(points: &[Belief]) -> Option<usize> {
    let m = points[0].len();
    // the lattice with denominator r has C(r + m - 1, m - 1) points
    let count = |r: usize| -> usize {
        let mut c: u128 = 1;
        for i in 0..(m - 1) {
            c = c * (r + m - 1 - i) as u128 / (i + 1) as u128;
        }
        c as usize
    };
    let mut r = 1;
    while count(r) < points.len() {
        r += 1;
    }
    if count(r) != points.len() {
        return None;
    }
    let rf = r as f64;
    let mut seen = std::collections::HashSet::new();
    for p in points {
        let mut key = Vec::with_capacity(m);
        for &x in p.probs() {
            let c = (x * rf).round();
            if (x * rf - c).abs() > 1e-9 {
                return None;
            }
            key.push(c as usize);
        }
        if key.iter().sum::<usize>() != r || !seen.insert(key) {
            return None;
        }
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn b2(p: f64) -> Belief {
        Belief::binary(p).unwrap()
    }

    #[test]
    fn bayes_hand_example() {
        let post = bayes_update(&b2(0.5), &[0.8, 0.4]).unwrap();
        assert_abs_diff_eq!(post.probs()[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(post.probs()[1], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_belief_is_absorbing() {
        let post = bayes_update(&b2(1.0), &[0.3, 0.9]).unwrap();
        assert_eq!(post.probs(), &[1.0, 0.0]);
    }

    #[test]
    fn uninformative_observation_keeps_belief() {
        let b = Belief::new(vec![0.2, 0.3, 0.5]).unwrap();
        let post = bayes_update(&b, &[0.4, 0.4, 0.4]).unwrap();
        for (x, y) in post.probs().iter().zip(b.probs()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn infeasible_observation_is_signalled() {
        let err = bayes_update(&b2(1.0), &[0.0, 0.7]).unwrap_err();
        assert!(matches!(err, BeliefError::Infeasible { .. }));
    }

    #[test]
    fn invalid_beliefs_rejected() {
        assert!(Belief::new(vec![0.6, 0.6]).is_err());
        assert!(Belief::new(vec![1.2, -0.2]).is_err());
        assert!(Belief::new(vec![]).is_err());
    }

    #[test]
    fn grid_two_types_resolution_twenty() {
        let g = grid_sample(2, 20).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g.points()[0].probs(), &[0.0, 1.0]);
        assert_abs_diff_eq!(g.points()[1].probs()[0], 0.05);
        assert_abs_diff_eq!(g.points()[1].probs()[1], 0.95);
        assert_eq!(g.points()[20].probs(), &[1.0, 0.0]);
        assert_abs_diff_eq!(g.density(), 0.05, epsilon = 1e-12);
    }

    #[test]
    fn grid_endpoints_only() {
        let g = grid_sample(2, 1).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.density(), 1.0);
        assert_eq!(g.norm(), NormTag::L1);
    }

    #[test]
    fn grid_three_types_lattice() {
        let g = grid_sample(3, 2).unwrap();
        assert_eq!(g.len(), 6);
        assert_abs_diff_eq!(g.density(), 4.0 / 6.0, epsilon = 1e-12);
        assert!(grid_sample(2, 0).is_err());
    }

    #[test]
    fn density_recomputes_from_points() {
        for (m, r) in [(2, 7), (3, 4), (4, 3), (5, 2), (4, 1)] {
            let g = grid_sample(m, r).unwrap();
            let again = BeliefGrid::from_points(g.points().to_vec()).unwrap();
            assert!((again.density() - g.density()).abs() < 1e-9);
        }
    }

    #[test]
    fn non_lattice_points_beyond_two_types_rejected() {
        let pts = vec![Belief::uniform(3), Belief::vertex(3, 0)];
        assert!(BeliefGrid::from_points(pts).is_err());
    }

    #[test]
    fn weight_examples() {
        let b = b2(0.3);
        assert_abs_diff_eq!(weight(&b, &b, 1e-6), 1e6);
        assert_abs_diff_eq!(weight(&b2(0.25), &b2(0.5), 1e-6), 8.0, epsilon = 1e-12);
        assert_eq!(weight(&b2(0.1), &b2(0.7), 1e-6), weight(&b2(0.7), &b2(0.1), 1e-6));
    }

    fn three_point_grid() -> BeliefGrid {
        BeliefGrid::from_points(vec![b2(0.0), b2(0.5), b2(1.0)]).unwrap()
    }

    #[test]
    fn policy_interpolation_hand_example() {
        let g = three_point_grid();
        let pols = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]];
        let mix = interpolate_policy(&g, &pols, &b2(0.25), Interpolation::default()).unwrap();
        // weights 8, 8, 1/1.125
        let total = 8.0 + 8.0 + 1.0 / 1.125;
        assert_abs_diff_eq!(mix[0], 8.0 / total, epsilon = 1e-12);
        assert_abs_diff_eq!(mix[0], 0.4737, epsilon = 1e-4);
        assert_abs_diff_eq!(mix[1], 0.5263, epsilon = 1e-4);
    }

    #[test]
    fn policy_interpolation_symmetric_midpoint() {
        let g = BeliefGrid::from_points(vec![b2(0.0), b2(1.0)]).unwrap();
        let pols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mix = interpolate_policy(&g, &pols, &b2(0.5), Interpolation::default()).unwrap();
        assert_abs_diff_eq!(mix[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn grid_point_query_returns_stored_data() {
        let g = three_point_grid();
        let pols = vec![vec![0.2, 0.8], vec![0.7, 0.3], vec![0.1, 0.9]];
        let out = interpolate_policy(&g, &pols, &b2(0.5), Interpolation::default()).unwrap();
        assert_eq!(out, pols[1]);
        let v = interpolate_value(&g, &[0.0, 1.5, 2.0], &b2(1.0), Interpolation::default());
        assert_eq!(v.unwrap(), 2.0);
    }

    #[test]
    fn value_interpolation_hand_example() {
        let g = three_point_grid();
        let v = interpolate_value(&g, &[0.0, 1.0, 2.0], &b2(0.25), Interpolation::default())
            .unwrap();
        let w3 = 1.0 / 1.125;
        assert_abs_diff_eq!(v, (8.0 + 2.0 * w3) / (16.0 + w3), epsilon = 1e-12);
        assert_abs_diff_eq!(v, 0.5789, epsilon = 1e-4);
    }

    #[test]
    fn constant_values_interpolate_and_differentiate_trivially() {
        let g = grid_sample(2, 4).unwrap();
        let vals = vec![3.25; g.len()];
        let b = b2(0.37);
        let v = interpolate_value(&g, &vals, &b, Interpolation::default()).unwrap();
        assert_abs_diff_eq!(v, 3.25, epsilon = 1e-12);
        let grad = value_gradient_wrt_belief(&g, &vals, &b, Interpolation::default()).unwrap();
        assert!(grad.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn capped_point_contributes_no_derivative() {
        let g = three_point_grid();
        let vals = [0.0, 1.0, 4.0];
        // inside the cap of the middle point; the others still contribute
        let b = b2(0.5 + 4e-4);
        let mode = Interpolation::default();
        let w = g.weights(b.probs(), mode);
        assert!(w.exact_point().is_none());
        let mut grad = vec![0.0; 2];
        w.gradient(&g, |k| vals[k], &mut grad);
        let v = w.value(|k| vals[k]);
        // recompute by hand without the middle point's derivative
        let total: f64 = (0..3).map(|k| weight(&b, &g.points()[k], 1e-6)).sum();
        let mut expect = [0.0; 2];
        for k in [0usize, 2] {
            let p = g.points()[k].probs();
            let d2 = b.sq_l2_distance(&g.points()[k]);
            for i in 0..2 {
                expect[i] += -2.0 * (b.probs()[i] - p[i]) / (d2 * d2) * (vals[k] - v) / total;
            }
        }
        assert_abs_diff_eq!(grad[0], expect[0], epsilon = 1e-9 * expect[0].abs().max(1.0));
        assert_abs_diff_eq!(grad[1], expect[1], epsilon = 1e-9 * expect[1].abs().max(1.0));
    }

    #[test]
    fn nearest_mode_uses_closest_point() {
        let g = three_point_grid();
        let v = interpolate_value(&g, &[0.0, 1.0, 2.0], &b2(0.3), Interpolation::Nearest).unwrap();
        assert_eq!(v, 1.0);
        let v = interpolate_value(&g, &[0.0, 1.0, 2.0], &b2(0.2), Interpolation::Nearest).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn empty_or_mismatched_queries_error() {
        let g = three_point_grid();
        assert!(interpolate_value(&g, &[1.0], &b2(0.3), Interpolation::default()).is_err());
        let b3 = Belief::uniform(3);
        assert!(interpolate_value(&g, &[1.0, 2.0, 3.0], &b3, Interpolation::default()).is_err());
        assert!(BeliefGrid::from_points(vec![]).is_err());
    }
}

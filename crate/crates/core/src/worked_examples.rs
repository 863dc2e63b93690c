//! Reference computations with known closed-form answers: the Fitzpatrick
//! transform of an operator on the ℝ-tree and on ℍ², and the configuration
//! in ℍⁿ where the coupling fails to be affine along a geodesic.

use serde::Serialize;

use crate::conjugate::{coupling_pi, PairedPoint};
use crate::dual::DualVector;
use crate::error::Result;
use crate::ext_real::ExtReal;
use crate::fitzpatrick::{
    fitzpatrick_inf, fitzpatrick_sup, fitzpatrick_via_conjugate, min_monotonicity_gap, FitzQuery,
};
use crate::geometry::{Point, SpaceHandle};
use crate::monotone::{f_property_check, flatness_check, OperatorGraph};
use crate::report::PropertyReport;
use crate::scalar::{format_float, Scalar};
use crate::spaces::RTreePoint;
use crate::tolerance;

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleConfig {
    pub t0_values: Vec<Scalar>,
    pub n0_values: Vec<u64>,
    /// The ℝ-tree graph `{(x_n, [x_n x_{n+1}→]) : n >= 1}` is cut at this `n`.
    /// Its inner infimum is attained at `n = 1`.
    pub rtree_branches: u64,
    pub t_step: f64,
    pub t_max: f64,
    pub t_samples: Vec<f64>,
}

impl Default for ExampleConfig {
    fn default() -> Self {
        Self {
            t0_values: vec![Scalar::zero(), Scalar::ratio(1, 4), Scalar::ratio(1, 2), Scalar::one()],
            n0_values: vec![1, 2, 3, 4],
            rtree_branches: 32,
            t_step: 0.01,
            t_max: 10.0,
            t_samples: vec![0.0, 0.5, 1.0, 2.0, 5.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleRow {
    pub example: String,
    pub quantity: String,
    pub computed: String,
    pub expected: String,
    pub tolerance: String,
    pub pass: bool,
}

fn r(n: u64, t: Scalar) -> Point {
    Point::RTree(RTreePoint::new(n, t).expect("valid rtree point"))
}

/// `x_n = [(n, 1/n)]`.
fn rtree_x(n: u64) -> Point {
    r(n, Scalar::ratio(1, n as i64))
}

/// `{(x_n, [x_n x_{n+1}→]) : 1 <= n <= branches}`.
pub fn rtree_example_graph(branches: u64) -> OperatorGraph {
    let pairs = (1..=branches)
        .map(|n| {
            let xd = DualVector::bound(rtree_x(n), rtree_x(n + 1)).expect("same space");
            PairedPoint::new(rtree_x(n), xd).expect("same space")
        })
        .collect();
    OperatorGraph::new(SpaceHandle::rtree(), pairs).expect("same space")
}

/// `p = [(n0, t0)]`, `x = root`, `x◊ = [[(2, 2/3)] [(3, 1)]→]`.
pub fn rtree_example_query(n0: u64, t0: &Scalar) -> FitzQuery {
    let xd = DualVector::bound(r(2, Scalar::ratio(2, 3)), r(3, Scalar::one())).expect("same space");
    let q = PairedPoint::new(Point::RTree(RTreePoint::root()), xd).expect("same space");
    FitzQuery::new(r(n0, t0.clone()), q).expect("same space")
}

/// Expected `(π_p, Φ^p_T)` for the ℝ-tree query.
pub fn rtree_expected(n0: u64, t0: &Scalar) -> (Scalar, Scalar) {
    let slope = match n0 {
        2 => Scalar::ratio(5, 3),
        3 => Scalar::ratio(-5, 3),
        _ => Scalar::ratio(1, 3),
    };
    let pi = slope * t0;
    let phi = &pi + Scalar::ratio(7, 6);
    (pi, phi)
}

/// `α(t) = (sinh t, 0, cosh t)`.
pub fn alpha(t: f64) -> Point {
    Point::Hyperbolic(vec![t.sinh(), 0.0, t.cosh()])
}

/// `{(α(t), [α(t) α(t+1)→]) : t = 0, step, .., t_max}`.
pub fn hyperbolic_example_graph(step: f64, t_max: f64) -> OperatorGraph {
    let n = (t_max / step).round() as usize;
    let pairs = (0..=n)
        .map(|k| {
            let t = k as f64 * step;
            let xd = DualVector::bound(alpha(t), alpha(t + 1.0)).expect("same space");
            PairedPoint::new(alpha(t), xd).expect("same space")
        })
        .collect();
    OperatorGraph::new(SpaceHandle::hyperbolic(2), pairs).expect("same space")
}

/// `p = (1, -1, √3)`, `x = (0, 0, 1)`, `x◊ = [(1, 0, √2)(0, -1, √2)→]`.
pub fn hyperbolic_example_query() -> FitzQuery {
    let s2 = 2f64.sqrt();
    let xd = DualVector::bound(
        Point::Hyperbolic(vec![1.0, 0.0, s2]),
        Point::Hyperbolic(vec![0.0, -1.0, s2]),
    )
    .expect("same space");
    let q = PairedPoint::new(Point::Hyperbolic(vec![0.0, 0.0, 1.0]), xd).expect("same space");
    FitzQuery::new(Point::Hyperbolic(vec![1.0, -1.0, 3f64.sqrt()]), q).expect("same space")
}

/// `x* = [ab→]` with `a = (1, 0, √2)`, `b = (-1, 0, √2)`, and the points
/// `x = (0, 1, √2)`, `y = (-1, 0, √2)` of ℍ².
pub struct NonFlatWitness {
    pub xd: DualVector,
    pub a: Point,
    pub x: Point,
    pub y: Point,
}

pub fn non_flat_witness() -> NonFlatWitness {
    let s2 = 2f64.sqrt();
    let a = Point::Hyperbolic(vec![1.0, 0.0, s2]);
    let b = Point::Hyperbolic(vec![-1.0, 0.0, s2]);
    NonFlatWitness {
        xd: DualVector::bound(a.clone(), b).expect("same space"),
        a,
        x: Point::Hyperbolic(vec![0.0, 1.0, s2]),
        y: Point::Hyperbolic(vec![-1.0, 0.0, s2]),
    }
}

impl NonFlatWitness {
    /// `(<x*, x(½x ⊕ ½y)→>, ½<x*, xx→> + ½<x*, xy→>)`.
    pub fn sides(&self) -> Result<(f64, f64)> {
        crate::monotone::f_property_sides(&self.xd, &self.x, &self.x, &self.y, 0.5)
    }

    pub fn f_property(&self) -> Result<crate::monotone::FPropertyReport> {
        let m = vec![
            PairedPoint::new(self.x.clone(), self.xd.clone())?,
            PairedPoint::new(self.y.clone(), self.xd.clone())?,
        ];
        f_property_check(&m, &self.x, &[0.5], tolerance::HYPERBOLIC)
    }

    pub fn flatness(&self) -> Result<PropertyReport> {
        let triples = vec![(self.x.clone(), self.y.clone(), self.a.clone())];
        flatness_check(&SpaceHandle::hyperbolic(2), &triples, &[0.5], tolerance::HYPERBOLIC)
    }
}

struct Rows(Vec<ExampleRow>);

impl Rows {
    fn push(&mut self, example: &str, quantity: String, computed: String, expected: String, tol: &str, pass: bool) {
        self.0.push(ExampleRow {
            example: example.into(),
            quantity,
            computed,
            expected,
            tolerance: tol.into(),
            pass,
        });
    }

    fn exact(&mut self, example: &str, quantity: String, computed: &ExtReal, expected: &Scalar) {
        let pass = matches!(computed, ExtReal::Finite(c) if c.is_exact() && c == expected);
        self.push(
            example,
            quantity,
            computed.to_string(),
            expected.to_string(),
            "exact",
            pass,
        );
    }

    fn approx(&mut self, example: &str, quantity: String, computed: f64, expected: f64, tol: f64) {
        let pass = (computed - expected).abs() <= tol;
        self.push(
            example,
            quantity,
            format_float(computed),
            format_float(expected),
            &format_float(tol),
            pass,
        );
    }
}

pub fn run_worked_examples(cfg: &ExampleConfig) -> Result<Vec<ExampleRow>> {
    let mut rows = Rows(Vec::new());

    let g = rtree_example_graph(cfg.rtree_branches);
    let base = rtree_example_query(2, &Scalar::zero());
    let inner = min_monotonicity_gap(&g, &base.q)?;
    rows.exact(
        "rtree",
        "inf <x◊ - y◊, yx→> over gra T".into(),
        &inner,
        &Scalar::ratio(-7, 6),
    );
    for &n0 in &cfg.n0_values {
        for t0 in &cfg.t0_values {
            let q = rtree_example_query(n0, t0);
            let (pi_expected, phi_expected) = rtree_expected(n0, t0);
            let pi = ExtReal::finite(coupling_pi(&q.p, &q.q)?);
            rows.exact("rtree", format!("π_p, n0 = {n0}, t0 = {t0}"), &pi, &pi_expected);
            let sup = fitzpatrick_sup(&g, &q)?;
            let inf = fitzpatrick_inf(&g, &q)?;
            let conj = fitzpatrick_via_conjugate(&g, &q, tolerance::CLOSED_FORM)?;
            rows.exact(
                "rtree",
                format!("Φ^p_T (sup form), n0 = {n0}, t0 = {t0}"),
                &sup,
                &phi_expected,
            );
            rows.exact(
                "rtree",
                format!("Φ^p_T (inf form), n0 = {n0}, t0 = {t0}"),
                &inf,
                &phi_expected,
            );
            rows.exact(
                "rtree",
                format!("Φ^p_T (conjugate form), n0 = {n0}, t0 = {t0}"),
                &conj,
                &phi_expected,
            );
        }
    }

    let hq = hyperbolic_example_query();
    let pi = coupling_pi(&hq.p, &hq.q)?.to_f64();
    rows.approx("hyperbolic", "π_p(x, x◊)".into(), pi, 0.0, tolerance::CLOSED_FORM);
    for &t in &cfg.t_samples {
        let yd = DualVector::bound(alpha(t), alpha(t + 1.0))?;
        let v = yd.pair_points(&alpha(t), &hq.q.x)?.to_f64();
        rows.approx(
            "hyperbolic",
            format!("<y◊, yx→>, t = {t}"),
            v,
            -t,
            tolerance::CLOSED_FORM,
        );
    }
    let hg = hyperbolic_example_graph(cfg.t_step, cfg.t_max);
    let forms = [
        ("sup", fitzpatrick_sup(&hg, &hq)?),
        ("inf", fitzpatrick_inf(&hg, &hq)?),
        ("conjugate", fitzpatrick_via_conjugate(&hg, &hq, tolerance::HYPERBOLIC)?),
    ];
    for (name, v) in forms {
        rows.approx(
            "hyperbolic",
            format!("Φ^p_T on t-grid ({name} form, step {}, t <= {})", cfg.t_step, cfg.t_max),
            v.to_f64(),
            0.0,
            1e-6,
        );
    }

    let w = non_flat_witness();
    let (lhs, rhs) = w.sides()?;
    rows.approx(
        "non-flat",
        "<x*, x(½x ⊕ ½y)→>".into(),
        lhs,
        0.6816,
        tolerance::ROUNDED_4DP,
    );
    rows.approx(
        "non-flat",
        "½<x*, xx→> + ½<x*, xy→>".into(),
        rhs,
        0.7768,
        tolerance::ROUNDED_4DP,
    );
    let flat = w.flatness()?;
    rows.push(
        "non-flat",
        "CN equality at (x, y, a, ½)".into(),
        flat.holds.to_string(),
        "false".into(),
        "-",
        !flat.holds,
    );
    let fp = w.f_property()?;
    rows.push(
        "non-flat",
        "F-property of {x, y} × {x*}".into(),
        fp.holds().to_string(),
        "false".into(),
        "-",
        !fp.holds(),
    );
    Ok(rows.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_pass() {
        let rows = run_worked_examples(&ExampleConfig::default()).unwrap();
        for row in &rows {
            assert!(row.pass, "{row:?}");
        }
        assert!(rows.len() > 60);
    }

    #[test]
    fn truncation_does_not_move_the_infimum() {
        let q = rtree_example_query(3, &Scalar::ratio(1, 2));
        for n in [1, 2, 5, 64] {
            let g = rtree_example_graph(n);
            assert_eq!(
                min_monotonicity_gap(&g, &q.q).unwrap(),
                ExtReal::finite(Scalar::ratio(-7, 6))
            );
        }
    }
}

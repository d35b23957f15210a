//! Closed forms and explicit Euler integration for the greedy matching
//! process on `u`-uniform `d`-regular hypergraphs of large girth.
//!
//! The system is
//!
//! ```text
//! v' = -v,   c' = v,   q' = -1/d - a q,   q(0) = v(0) = 1, c(0) = 0
//! ```
//!
//! whose solution is `v = e^{-t}`, `c = 1 - e^{-t}` and
//! `q(t) = (1 + 1/(ad)) e^{-at} - 1/(ad)`. The process stops at the root
//! `t*` of `q`, covering a `1 - e^{-t*}` fraction of the vertices.
//!
//! Two decay coefficients `a` appear in the literature for this process and
//! are not equal; see [`Coefficient`]. The default,
//! [`Coefficient::ClosedForm`], is the one for which `q(t*) = 0` with
//! `t* = log(ud - d) / (u - 1 - 1/d)`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Decay coefficient `a` of `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coefficient {
    /// `a = u - 1 - 1/d`; consistent with `t* = log(ud-d)/(u-1-1/d)`.
    #[default]
    ClosedForm,
    /// `a = u - 1 - u/d`; the coefficient produced by the step-by-step
    /// difference equation of the greedy process.
    Derived,
}

/// Parameters `(u, d)` of the ODE system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OdeParams {
    pub u: usize,
    pub d: usize,
}

impl OdeParams {
    /// Requires `u >= 2`, `d >= 2`, `u - 1 - 1/d > 0` and `ud - d > 1`.
    pub fn new(u: usize, d: usize) -> Result<Self> {
        if u < 2 || d < 2 {
            return Err(Error::InvalidParameter(format!("need u >= 2 and d >= 2, got u={u}, d={d}")));
        }
        let p = OdeParams { u, d };
        if !(p.coefficient(Coefficient::ClosedForm) > 0.0) || u * d - d <= 1 {
            return Err(Error::InvalidParameter(format!("degenerate parameters u={u}, d={d}")));
        }
        Ok(p)
    }

    pub fn coefficient(&self, which: Coefficient) -> f64 {
        let (u, d) = (self.u as f64, self.d as f64);
        match which {
            Coefficient::ClosedForm => u - 1.0 - 1.0 / d,
            Coefficient::Derived => u - 1.0 - u / d,
        }
    }

    /// Closed-form `q(t)` for the default coefficient.
    pub fn q_closed(&self, t: f64) -> Result<f64> {
        self.q_closed_with(Coefficient::ClosedForm, t)
    }

    pub fn q_closed_with(&self, which: Coefficient, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time {t} must be non-negative")));
        }
        let a = self.coefficient(which);
        let d = self.d as f64;
        let ad = a * d;
        if ad == 0.0 {
            return Ok(1.0 - t / d);
        }
        Ok((1.0 + 1.0 / ad) * libm::exp(-a * t) - 1.0 / ad)
    }

    /// Root of `q` for the default coefficient: `log(ud - d) / (u - 1 - 1/d)`.
    pub fn t_star(&self) -> f64 {
        let (u, d) = (self.u as f64, self.d as f64);
        libm::log(u * d - d) / (u - 1.0 - 1.0 / d)
    }

    /// Root of `q` for either coefficient: `log(1 + ad) / a`, or `d` when
    /// `a = 0`.
    pub fn t_star_with(&self, which: Coefficient) -> f64 {
        if which == Coefficient::ClosedForm {
            return self.t_star();
        }
        let a = self.coefficient(which);
        let d = self.d as f64;
        if a == 0.0 {
            d
        } else {
            libm::log1p(a * d) / a
        }
    }

    /// Predicted matched fraction `1 - e^{-t*}`.
    pub fn predicted_coverage(&self) -> f64 {
        -libm::expm1(-self.t_star())
    }

    pub fn predicted_coverage_with(&self, which: Coefficient) -> f64 {
        -libm::expm1(-self.t_star_with(which))
    }

    /// `1 - (1/((u-1)d))^{u-1-1/d}`, an alternative algebraic rendering of
    /// the predicted coverage that circulates with this result. It does not
    /// equal `1 - e^{-t*}` (the exponent is inverted); exposed only so that
    /// reports can show the discrepancy.
    pub fn displayed_coverage_expression(&self) -> f64 {
        let (u, d) = (self.u as f64, self.d as f64);
        1.0 - libm::pow(1.0 / ((u - 1.0) * d), u - 1.0 - 1.0 / d)
    }

    /// Explicit Euler trajectories on the grid `t_k = k * step`,
    /// `k = 0..=floor(horizon / step)`.
    pub fn euler_integrate(&self, step: f64, horizon: f64) -> Result<Trajectory> {
        self.euler_integrate_with(Coefficient::ClosedForm, step, horizon)
    }

    pub fn euler_integrate_with(&self, which: Coefficient, step: f64, horizon: f64) -> Result<Trajectory> {
        if !(step > 0.0 && step <= 1e-2) {
            return Err(Error::InvalidParameter(format!("step {step} not in (0, 0.01]")));
        }
        let limit = self.t_star_with(which) + 1.0;
        if !(horizon >= 0.0 && horizon <= limit) {
            return Err(Error::InvalidParameter(format!("horizon {horizon} not in [0, {limit}]")));
        }
        let a = self.coefficient(which);
        let inv_d = 1.0 / self.d as f64;
        let steps = libm::floor(horizon / step + 1e-9) as usize;
        let mut traj = Trajectory::with_capacity(steps + 1);
        let (mut v, mut c, mut q) = (1.0, 0.0, 1.0);
        traj.push(0.0, v, c, q);
        for k in 1..=steps {
            let (dv, dc, dq) = (-v, v, -inv_d - a * q);
            v += step * dv;
            c += step * dc;
            q += step * dq;
            traj.push(k as f64 * step, v, c, q);
        }
        Ok(traj)
    }
}

/// Sampled `(t, v, c, q)` trajectories.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub c: Vec<f64>,
    pub q: Vec<f64>,
}

impl Trajectory {
    fn with_capacity(n: usize) -> Self {
        Trajectory {
            t: Vec::with_capacity(n),
            v: Vec::with_capacity(n),
            c: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, t: f64, v: f64, c: f64, q: f64) {
        self.t.push(t);
        self.v.push(v);
        self.c.push(c);
        self.q.push(q);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// One row of a prediction sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub u: usize,
    pub d: usize,
    pub t_star: f64,
    pub coverage: f64,
}

/// `t*` and predicted coverage for every valid `(u, d)` in the ranges.
pub fn prediction_table(
    us: impl IntoIterator<Item = usize>,
    ds: impl IntoIterator<Item = usize> + Clone,
) -> Vec<Prediction> {
    let mut rows = Vec::new();
    for u in us {
        for d in ds.clone() {
            if let Ok(p) = OdeParams::new(u, d) {
                rows.push(Prediction { u, d, t_star: p.t_star(), coverage: p.predicted_coverage() });
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(OdeParams::new(1, 3).is_err());
        assert!(OdeParams::new(2, 1).is_err());
        assert!(OdeParams::new(2, 2).is_ok());
        let p = OdeParams::new(2, 3).unwrap();
        assert!(p.q_closed(-0.1).is_err());
        assert!(p.euler_integrate(0.02, 1.0).is_err());
        assert!(p.euler_integrate(1e-3, p.t_star() + 1.5).is_err());
    }

    #[test]
    fn closed_form_corners() {
        for u in 2..=6 {
            for d in 2..=50 {
                let p = OdeParams::new(u, d).unwrap();
                assert!((p.q_closed(0.0).unwrap() - 1.0).abs() < 1e-12);
                assert!(p.q_closed(p.t_star()).unwrap().abs() < 1e-12);
                let a = p.coefficient(Coefficient::ClosedForm);
                let lhs = libm::exp(-a * p.t_star());
                assert!((lhs - 1.0 / (u * d - d) as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derived_coefficient_root() {
        // u = d = 2 makes the derived coefficient vanish: q = 1 - t/2
        let p = OdeParams::new(2, 2).unwrap();
        assert_eq!(p.t_star_with(Coefficient::Derived), 2.0);
        assert_eq!(p.q_closed_with(Coefficient::Derived, 1.0), Ok(0.5));
        for (u, d) in [(2, 3), (3, 2), (3, 10), (4, 7)] {
            let p = OdeParams::new(u, d).unwrap();
            let t = p.t_star_with(Coefficient::Derived);
            assert!(p.q_closed_with(Coefficient::Derived, t).unwrap().abs() < 1e-12);
        }
        // u = 2: 1 - (d-1)^{-d/(d-2)}, the random greedy matching constant
        let p = OdeParams::new(2, 3).unwrap();
        assert!((p.predicted_coverage_with(Coefficient::Derived) - 0.875).abs() < 1e-12);
    }

    #[test]
    fn euler_conserves_mass() {
        let p = OdeParams::new(3, 2).unwrap();
        let tr = p.euler_integrate(1e-3, p.t_star() + 1.0).unwrap();
        assert_eq!(tr.t[0], 0.0);
        assert_eq!((tr.v[0], tr.c[0], tr.q[0]), (1.0, 0.0, 1.0));
        for (v, c) in tr.v.iter().zip(&tr.c) {
            assert!((v + c - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn prediction_table_skips_invalid() {
        let rows = prediction_table(1..=3, 1..=4);
        assert!(rows.iter().all(|r| r.u >= 2 && r.d >= 2));
        assert_eq!(rows.len(), 6);
    }
}

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegimeTag {
    /// `c = ¼w²`, the equality end of the ancient range.
    SelfSimilar,
    /// `¼w² ≤ c < ½w²`
    Ancient,
    /// `c = ½w²`
    Eternal,
    /// `c > ½w²`
    Immortal,
}

impl RegimeTag {
    pub fn is_ancient(self) -> bool {
        matches!(self, RegimeTag::SelfSimilar | RegimeTag::Ancient)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegimeTag::SelfSimilar => "Ancient/SelfSimilar",
            RegimeTag::Ancient => "Ancient",
            RegimeTag::Eternal => "Eternal",
            RegimeTag::Immortal => "Immortal",
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowRegime {
    pub tag: RegimeTag,
    pub c: f64,
    pub w2sq: f64,
    pub f0: f64,
}

/// Classifies special data `(c, |w₂⁻|², F₀)`; boundaries are resolved within `eps`.
pub fn classify(c: f64, w2sq: f64, f0: f64, eps: f64) -> Result<FlowRegime> {
    if !(w2sq > 0.0) || !(f0 > 0.0) || !c.is_finite() {
        return Err(Error::InvalidFlowData(format!(
            "need |w2|^2 > 0 and F0 > 0, got |w2|^2 = {w2sq}, F0 = {f0}, c = {c}"
        )));
    }
    let quarter = 0.25 * w2sq;
    if c < quarter - eps {
        return Err(Error::BelowLowerBound { c, bound: quarter });
    }
    let tag = if (c - 0.5 * w2sq).abs() < eps {
        RegimeTag::Eternal
    } else if (c - quarter).abs() < eps {
        RegimeTag::SelfSimilar
    } else if c < 0.5 * w2sq {
        RegimeTag::Ancient
    } else {
        RegimeTag::Immortal
    };
    Ok(FlowRegime { tag, c, w2sq, f0 })
}

impl FlowRegime {
    /// Maximal existence interval `(t_min, t_max)`.
    pub fn interval(&self) -> (f64, f64) {
        let FlowRegime { c, w2sq: w, f0, .. } = *self;
        match self.tag {
            RegimeTag::Eternal => (f64::NEG_INFINITY, f64::INFINITY),
            RegimeTag::SelfSimilar | RegimeTag::Ancient => {
                (f64::NEG_INFINITY, 1.0 / ((w - 2.0 * c) * f0 * f0))
            }
            RegimeTag::Immortal => (1.0 / ((w - 2.0 * c) * f0 * f0), f64::INFINITY),
        }
    }

    pub fn solution(&self) -> FlowSolution {
        let (t_min, t_max) = self.interval();
        FlowSolution {
            regime: *self,
            t_min,
            t_max,
        }
    }
}

/// Closed-form solution `a(t)`, `F(t)`, `|N|²(t)` of the invariant flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowSolution {
    pub regime: FlowRegime,
    pub t_min: f64,
    pub t_max: f64,
}

impl FlowSolution {
    pub fn contains(&self, t: f64) -> bool {
        t > self.t_min && t < self.t_max
    }

    fn guard(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutsideInterval {
                t,
                t_min: self.t_min,
                t_max: self.t_max,
            })
        }
    }

    /// `(2c − w²)F₀²t + 1`
    fn base(&self, t: f64) -> f64 {
        let r = &self.regime;
        (2.0 * r.c - r.w2sq) * r.f0 * r.f0 * t + 1.0
    }

    fn eternal(&self) -> bool {
        self.regime.tag == RegimeTag::Eternal
    }

    pub fn a(&self, t: f64) -> Result<f64> {
        self.guard(t)?;
        let FlowRegime { c, w2sq: w, f0, .. } = self.regime;
        Ok(if self.eternal() {
            f0 / c * (c * f0 * f0 * t).exp_m1()
        } else {
            f0 / c * (self.base(t).powf(c / (2.0 * c - w)) - 1.0)
        })
    }

    pub fn a_prime(&self, t: f64) -> Result<f64> {
        self.guard(t)?;
        let FlowRegime { c, w2sq: w, f0, .. } = self.regime;
        Ok(if self.eternal() {
            f0.powi(3) * (c * f0 * f0 * t).exp()
        } else {
            f0.powi(3) * self.base(t).powf((w - c) / (2.0 * c - w))
        })
    }

    /// `F₀(1 + c a/F₀)^{w²/(4c)}`
    pub fn f(&self, t: f64) -> Result<f64> {
        let a = self.a(t)?;
        Ok(self.f_of_a(a))
    }

    pub fn f_of_a(&self, a: f64) -> f64 {
        let FlowRegime { c, w2sq: w, f0, .. } = self.regime;
        f0 * (1.0 + c * a / f0).powf(w / (4.0 * c))
    }

    pub fn nijenhuis_sq(&self, t: f64) -> Result<f64> {
        self.guard(t)?;
        let FlowRegime { c, w2sq: w, f0, .. } = self.regime;
        Ok(if self.eternal() {
            0.5 * w * (-c * f0 * f0 * t).exp()
        } else {
            0.5 * w * self.base(t).powf((w - 4.0 * c) / (2.0 * (2.0 * c - w)))
        })
    }

    /// Right-hand side of the scalar ODE `a' = F₀³(1 + c a/F₀)^{w²/c − 1}`.
    pub fn ode_rhs(&self, a: f64) -> f64 {
        let FlowRegime { c, w2sq: w, f0, .. } = self.regime;
        f0.powi(3) * (1.0 + c * a / f0).powf(w / c - 1.0)
    }

    /// `t` clamped into the open interval, `margin` away from a finite endpoint.
    pub fn clamp(&self, t: f64, margin: f64) -> f64 {
        t.max(self.t_min + margin).min(self.t_max - margin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(
            classify(2.0, 8.0, 2.0, 1e-9).unwrap().tag,
            RegimeTag::SelfSimilar
        );
        assert_eq!(
            classify(4.0, 8.0, 2.0, 1e-9).unwrap().tag,
            RegimeTag::Eternal
        );
        assert_eq!(
            classify(6.0, 6.0, 2.0, 1e-9).unwrap().tag,
            RegimeTag::Immortal
        );
        assert_eq!(
            classify(2.0, 6.0, 2.0, 1e-9).unwrap().tag,
            RegimeTag::Ancient
        );
        assert!(matches!(
            classify(1.0, 8.0, 2.0, 1e-9),
            Err(Error::BelowLowerBound { .. })
        ));
        assert!(classify(1.0, 0.0, 2.0, 1e-9).is_err());
    }

    #[test]
    fn intervals() {
        let s = classify(2.0, 8.0, 2.0, 1e-9).unwrap().solution();
        assert_eq!(s.t_min, f64::NEG_INFINITY);
        assert!((s.t_max - 1.0 / 16.0).abs() < 1e-15);
        let s = classify(6.0, 6.0, 2.0, 1e-9).unwrap().solution();
        assert!((s.t_min + 1.0 / 24.0).abs() < 1e-15);
        assert!(matches!(s.a(-0.05), Err(Error::OutsideInterval { .. })));
    }

    #[test]
    fn known_closed_forms() {
        let s = classify(2.0, 2.0, 2.0, 1e-9).unwrap().solution();
        for t in [-0.1, 0.0, 0.3, 2.0] {
            assert!((s.a(t).unwrap() - 8.0 * t).abs() < 1e-12);
        }
        let s = classify(2.0, 8.0, 2.0, 1e-9).unwrap().solution();
        for t in [-1.0, 0.0, 0.03, 0.06] {
            let a = s.a(t).unwrap();
            assert!((a - ((1.0 - 16.0 * t).powf(-0.5) - 1.0)).abs() < 1e-12);
            assert!((s.nijenhuis_sq(t).unwrap() - 4.0).abs() < 1e-12);
            assert!((s.f(t).unwrap() - 2.0 / (1.0 - 16.0 * t).sqrt()).abs() < 1e-12);
        }
        let s = classify(4.0, 8.0, 2.0, 1e-9).unwrap().solution();
        assert!((s.f(0.1).unwrap() - 2.0 * (0.8f64).exp()).abs() < 1e-12);
    }
}

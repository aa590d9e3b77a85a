//! Asymptotic shape `f(n) ~ A(n) = a n^(-b) exp(c n^beta)` and the
//! second-order relative error `eps_n = eps_const / n^beta`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Builtin, Error, Result};

/// Apery's constant `zeta(3)`.
pub const ZETA3: f64 = 1.202_056_903_159_594_2;
/// `zeta'(-1)`.
pub const ZETA_PRIME_MINUS1: f64 = -0.165_421_143_700_450_92;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub eps_const: f64,
}

impl AsymptoticParams {
    pub fn new(a: f64, b: f64, c: f64, beta: f64, eps_const: f64) -> Result<Self> {
        let p = AsymptoticParams { a, b, c, beta, eps_const };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.c, self.beta, self.eps_const].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if self.a <= 0.0 || self.c <= 0.0 || self.eps_const <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "a, c and eps_const must be positive (a = {}, c = {}, eps_const = {})",
                self.a, self.c, self.eps_const
            )));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParams(format!("beta must lie in (0, 1], got {}", self.beta)));
        }
        Ok(())
    }

    pub fn with_eps_const(self, eps_const: f64) -> Result<Self> {
        AsymptoticParams::new(self.a, self.b, self.c, self.beta, eps_const)
    }

    /// Parameters for the builtins that have a known asymptotic.
    pub fn builtin(b: &Builtin) -> Result<Self> {
        let s6 = 6f64.sqrt();
        let (a, bb, c, beta, eps) = match b {
            Builtin::P => (
                1.0 / (4.0 * 3f64.sqrt()),
                1.0,
                PI * (2.0f64 / 3.0).sqrt(),
                0.5,
                1.5f64.sqrt() / PI + PI / (24.0 * s6),
            ),
            Builtin::Overpartition => (1.0 / 8.0, 1.0, PI, 0.5, 1.0 / PI),
            Builtin::Strict => (
                1.0 / (4.0 * 3f64.powf(0.25)),
                0.75,
                PI / 3f64.sqrt(),
                0.5,
                (PI / (48.0 * 3f64.sqrt()) - 3.0 * 3f64.sqrt() / (8.0 * PI)).abs(),
            ),
            Builtin::SelfConjugate => (
                1.0 / (2.0 * 24f64.powf(0.25)),
                0.75,
                PI / s6,
                0.5,
                3.0 * s6 / (8.0 * PI) + PI / (48.0 * s6),
            ),
            Builtin::NonUnitary => (
                PI / (12.0 * 2f64.sqrt()),
                1.5,
                PI * (2.0f64 / 3.0).sqrt(),
                0.5,
                3.0 * 1.5f64.sqrt() / PI + 13.0 * PI / (24.0 * s6),
            ),
            Builtin::Plane => (
                ZETA3.powf(7.0 / 36.0) * ZETA_PRIME_MINUS1.exp() / (2f64.powf(11.0 / 36.0) * (3.0 * PI).sqrt()),
                25.0 / 36.0,
                3.0 * ZETA3.powf(1.0 / 3.0) / 2f64.powf(2.0 / 3.0),
                2.0 / 3.0,
                277.0 / (864.0 * (2.0 * ZETA3).powf(1.0 / 3.0)) - ZETA3.powf(2.0 / 3.0) / (1440.0 * 2f64.powf(1.0 / 3.0)),
            ),
            other => {
                return Err(Error::InvalidParams(format!("no asymptotic parameters known for `{other}`")));
            }
        };
        AsymptoticParams::new(a, bb, c, beta, eps)
    }

    /// The variant `sqrt(3/2) pi + pi/(24 sqrt 6)` of the ε constant for `p`,
    /// with the first term multiplied rather than divided by `pi`. The
    /// builtin default is the second-order Rademacher term; see the README.
    pub fn p_alt_eps_const() -> f64 {
        1.5f64.sqrt() * PI + PI / (24.0 * 6f64.sqrt())
    }

    /// `A(n)` in double precision (for reporting and smooth formulas only).
    pub fn a_approx(&self, n: f64) -> f64 {
        (self.a.ln() - self.b * n.ln() + self.c * n.powf(self.beta)).exp()
    }

    pub fn eps_n(&self, n: f64) -> f64 {
        self.eps_const / n.powf(self.beta)
    }
}

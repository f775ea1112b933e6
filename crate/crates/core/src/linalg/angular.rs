//! Angular-momentum special functions: factorial tables and Clebsch–Gordan
//! coefficients (Condon–Shortley phase).

use std::sync::OnceLock;

use crate::error::{Error, Result};

const LOG_FACTORIAL_LEN: usize = 1024;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACTORIAL_LEN);
        t.push(0.0);
        for k in 1..LOG_FACTORIAL_LEN {
            t.push(t[k - 1] + (k as f64).ln());
        }
        t
    })
}

/// ln(n!)
pub fn ln_factorial(n: usize) -> f64 {
    assert!(n < LOG_FACTORIAL_LEN, "ln_factorial({n}) exceeds table size");
    log_factorial_table()[n]
}

/// Binomial coefficient as a float; exact for all values below 2^53.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 1..=k {
        acc = acc * (n - k + i) as f64 / i as f64;
    }
    acc.round()
}

/// A half-integer quantum number stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i32);

impl HalfInt {
    pub fn from_f64(x: f64) -> Result<Self> {
        let twice = 2.0 * x;
        let r = twice.round();
        if !x.is_finite() || (twice - r).abs() > 1e-9 || r.abs() > i32::MAX as f64 {
            return Err(Error::InvalidQuantumNumbers(format!("{x} is not a half-integer")));
        }
        Ok(Self(r as i32))
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

/// (a + b + ...)/2 as a factorial argument; None if negative or odd.
fn half(twice: i32) -> Option<usize> {
    (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as usize)
}

/// ⟨j1 m1; j2 m2 | J M⟩ with all arguments given as twice their values.
/// Returns 0 for any selection-rule violation.
pub fn cg_twice(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32) -> f64 {
    if tm1 + tm2 != tm || tj1 < 0 || tj2 < 0 || tj < 0 {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 {
        return 0.0;
    }
    let (Some(a), Some(b), Some(c)) = (half(tj + tj1 - tj2), half(tj - tj1 + tj2), half(tj1 + tj2 - tj))
    else {
        return 0.0;
    };
    let Some(total) = half(tj1 + tj2 + tj + 2) else { return 0.0 };
    let f = ln_factorial;
    let jp = |tj: i32, tm: i32| half(tj + tm).expect("parity checked above");
    let jm = |tj: i32, tm: i32| half(tj - tm).expect("parity checked above");

    let log_prefactor = 0.5
        * (((tj + 1) as f64).ln() + f(a) + f(b) + f(c) - f(total)
            + f(jp(tj, tm))
            + f(jm(tj, tm))
            + f(jm(tj1, tm1))
            + f(jp(tj1, tm1))
            + f(jm(tj2, tm2))
            + f(jp(tj2, tm2)));

    // k runs over all values keeping every factorial argument non-negative.
    let c1 = c as i64; // j1 + j2 - J
    let c2 = jm(tj1, tm1) as i64; // j1 - m1
    let c3 = jp(tj2, tm2) as i64; // j2 + m2
    let c4 = ((tj - tj2 + tm1) / 2) as i64; // J - j2 + m1
    let c5 = ((tj - tj1 - tm2) / 2) as i64; // J - j1 - m2
    let kmin = 0.max(-c4).max(-c5);
    let kmax = c1.min(c2).min(c3);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let denom = f(k as usize)
            + f((c1 - k) as usize)
            + f((c2 - k) as usize)
            + f((c3 - k) as usize)
            + f((c4 + k) as usize)
            + f((c5 + k) as usize);
        let term = (log_prefactor - denom).exp();
        sum += if k % 2 == 0 { term } else { -term };
    }
    sum
}

/// ⟨j1 m1; j2 m2 | J M⟩ for half-integer arguments.
///
/// Arguments that are not half-integers, or magnitudes exceeding their
/// angular momentum, are rejected. Coefficients forbidden only by the
/// selection rules (M ≠ m1 + m2, triangle violation) are zero.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    let [tj1, tm1, tj2, tm2, tj, tm] =
        [j1, m1, j2, m2, j, m].map(|x| HalfInt::from_f64(x).map(HalfInt::twice));
    let (tj1, tm1, tj2, tm2, tj, tm) = (tj1?, tm1?, tj2?, tm2?, tj?, tm?);
    for (tjj, tmm) in [(tj1, tm1), (tj2, tm2), (tj, tm)] {
        if tjj < 0 || tmm.abs() > tjj || (tjj + tmm) % 2 != 0 {
            return Err(Error::InvalidQuantumNumbers(format!(
                "projection {} incompatible with angular momentum {}",
                tmm as f64 / 2.0,
                tjj as f64 / 2.0
            )));
        }
    }
    Ok(cg_twice(tj1, tm1, tj2, tm2, tj, tm))
}

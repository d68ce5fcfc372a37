use crate::error::{Error, Result};
use crate::types::{EvalResult, Method};

const LIMEXP: usize = 50;
const EPS: f64 = f64::EPSILON;

/// Wynn epsilon table in the condensed QUADPACK layout.
#[derive(Debug, Clone)]
pub(crate) struct EpsilonTable {
    pub n: usize,
    rlist2: [f64; LIMEXP + 2],
    nres: usize,
    res3la: [f64; 3],
}

impl EpsilonTable {
    pub fn new() -> Self {
        EpsilonTable { n: 0, rlist2: [0.0; LIMEXP + 2], nres: 0, res3la: [0.0; 3] }
    }

    pub fn append(&mut self, y: f64) {
        self.rlist2[self.n] = y;
        self.n += 1;
    }

    /// Extrapolated limit and error estimate from the current table.
    pub fn extrapolate(&mut self) -> (f64, f64) {
        let n = self.n - 1;
        let current = self.rlist2[n];
        if n < 2 {
            return (current, f64::MAX.max(5.0 * EPS * current.abs()));
        }
        let t = &mut self.rlist2;
        let mut result = current;
        let mut abserr = f64::MAX;
        let newelm = n / 2;
        let mut n_final = n;
        t[n + 2] = t[n];
        t[n] = f64::MAX;
        for i in 0..newelm {
            let mut res = t[n - 2 * i + 2];
            let e0 = t[n - 2 * i - 2];
            let e1 = t[n - 2 * i - 1];
            let e2 = res;
            let delta2 = e2 - e1;
            let err2 = delta2.abs();
            let tol2 = e2.abs().max(e1.abs()) * EPS;
            let delta3 = e1 - e0;
            let err3 = delta3.abs();
            let tol3 = e1.abs().max(e0.abs()) * EPS;
            if err2 <= tol2 && err3 <= tol3 {
                // e0, e1, e2 agree to machine accuracy
                let abserr = (err2 + err3).max(5.0 * EPS * res.abs());
                return (res, abserr);
            }
            let e3 = t[n - 2 * i];
            t[n - 2 * i] = e1;
            let delta1 = e1 - e3;
            let err1 = delta1.abs();
            let tol1 = e1.abs().max(e3.abs()) * EPS;
            if err1 <= tol1 || err2 <= tol2 || err3 <= tol3 {
                n_final = 2 * i;
                break;
            }
            let ss = 1.0 / delta1 + 1.0 / delta2 - 1.0 / delta3;
            if (ss * e1).abs() <= 1e-4 {
                n_final = 2 * i;
                break;
            }
            res = e1 + 1.0 / ss;
            t[n - 2 * i] = res;
            let error = err2 + (res - e2).abs() + err3;
            if error <= abserr {
                abserr = error;
                result = res;
            }
        }
        if n_final == LIMEXP - 1 {
            n_final = 2 * ((LIMEXP - 1) / 2);
        }
        if n % 2 == 1 {
            for i in 0..=newelm {
                t[1 + 2 * i] = t[2 * i + 3];
            }
        } else {
            for i in 0..=newelm {
                t[2 * i] = t[2 * i + 2];
            }
        }
        if n != n_final {
            for i in 0..=n_final {
                t[i] = t[n - n_final + i];
            }
        }
        self.n = n_final + 1;
        if self.nres < 3 {
            self.res3la[self.nres] = result;
            abserr = f64::MAX;
        } else {
            abserr = (result - self.res3la[2]).abs()
                + (result - self.res3la[1]).abs()
                + (result - self.res3la[0]).abs();
            self.res3la = [self.res3la[1], self.res3la[2], result];
        }
        self.nres += 1;
        (result, abserr.max(5.0 * EPS * result.abs()))
    }
}

fn wynn(partials: &[f64]) -> (f64, f64) {
    let mut table = EpsilonTable::new();
    let mut best = (*partials.last().unwrap(), f64::MAX);
    for &s in partials {
        if table.n >= LIMEXP {
            break;
        }
        table.append(s);
        let (r, e) = table.extrapolate();
        if e <= best.1 {
            best = (r, e);
        }
    }
    best
}

// Levin u-transform L_k built from the first k+1 partial sums.
fn levin_u(partials: &[f64], k: usize) -> Option<f64> {
    let beta = 1.0;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let a = if j == 0 { partials[0] } else { partials[j] - partials[j - 1] };
        if a == 0.0 {
            return None;
        }
        let omega = (beta + j as f64) * a;
        let c = binom * ((beta + j as f64) / (beta + k as f64)).powi(k as i32 - 1) / omega;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        num += sign * c * partials[j];
        den += sign * c;
        binom *= (k - j) as f64 / (j as f64 + 1.0);
    }
    let v = num / den;
    v.is_finite().then_some(v)
}

fn levin(partials: &[f64]) -> Option<(f64, f64)> {
    let n = partials.len();
    let mut best: Option<(f64, f64)> = None;
    let mut prev: Option<f64> = None;
    for k in 2..n {
        let v = levin_u(partials, k)?;
        if let Some(p) = prev {
            let e = (v - p).abs() + 16.0 * EPS * v.abs();
            if best.map_or(true, |b| e < b.1) {
                best = Some((v, e));
            }
        }
        prev = Some(v);
    }
    best
}

/// Extrapolated limit of a slowly convergent sequence of partial sums.
///
/// Runs the Wynn epsilon algorithm and the Levin u-transform and keeps the
/// estimate with the smaller error; the latter handles logarithmic
/// convergence, where the epsilon algorithm is ineffective.
pub fn accelerate(partials: &[f64]) -> Result<EvalResult> {
    let n = partials.len();
    if n < 4 {
        return Err(Error::Domain(format!("accelerate needs at least 4 terms, got {n}")));
    }
    if partials.iter().any(|p| !p.is_finite()) {
        return Err(Error::Domain("non-finite partial sum".into()));
    }
    let last = partials[n - 1];
    let tail = &partials[n - 3..];
    if tail.iter().all(|&p| (p - last).abs() <= 2.0 * EPS * last.abs()) {
        return EvalResult::new(last, 2.0 * EPS * last.abs(), Method::Exact).map(|e| e.with_work(n, n));
    }
    let (we, wr) = wynn(partials);
    let mut pick = (we, wr);
    if let Some((lv, le)) = levin(partials) {
        if le < wr {
            pick = (lv, le);
        }
    }
    if !pick.0.is_finite() || !(pick.1 < pick.0.abs().max(1e-300)) {
        return Err(Error::AccelerationStalled { value: pick.0, abs_err: pick.1 });
    }
    EvalResult::new(pick.0, pick.1, Method::Extrapolated).map(|e| e.with_work(n, n))
}

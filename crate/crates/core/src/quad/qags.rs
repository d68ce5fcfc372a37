//! Adaptive bisection with epsilon extrapolation (QUADPACK QAGS).

use super::epsilon::EpsilonTable;
use super::gk::{evals, qk, QkOut, Rule};

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Ok,
    MaxSubdivisions,
    Roundoff,
    BadIntegrand,
    ExtrapolationRoundoff,
    Divergent,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct QagsOut {
    pub result: f64,
    pub abserr: f64,
    pub neval: usize,
    pub status: Status,
}

struct Workspace {
    alist: Vec<f64>,
    blist: Vec<f64>,
    rlist: Vec<f64>,
    elist: Vec<f64>,
    order: Vec<usize>,
    level: Vec<usize>,
    limit: usize,
    size: usize,
    nrmax: usize,
    i: usize,
    maximum_level: usize,
}

impl Workspace {
    fn new(limit: usize, a: f64, b: f64, result: f64, error: f64) -> Self {
        let mut w = Workspace {
            alist: vec![0.0; limit],
            blist: vec![0.0; limit],
            rlist: vec![0.0; limit],
            elist: vec![0.0; limit],
            order: vec![0; limit],
            level: vec![0; limit],
            limit,
            size: 1,
            nrmax: 0,
            i: 0,
            maximum_level: 0,
        };
        w.alist[0] = a;
        w.blist[0] = b;
        w.rlist[0] = result;
        w.elist[0] = error;
        w
    }

    fn retrieve(&self) -> (f64, f64, f64, f64) {
        let i = self.i;
        (self.alist[i], self.blist[i], self.rlist[i], self.elist[i])
    }

    #[allow(clippy::too_many_arguments)]
    fn update(&mut self, a1: f64, b1: f64, area1: f64, error1: f64, a2: f64, b2: f64, area2: f64, error2: f64) {
        let i_max = self.i;
        let i_new = self.size;
        let new_level = self.level[i_max] + 1;
        if error2 > error1 {
            self.alist[i_max] = a2;
            self.rlist[i_max] = area2;
            self.elist[i_max] = error2;
            self.alist[i_new] = a1;
            self.blist[i_new] = b1;
            self.rlist[i_new] = area1;
            self.elist[i_new] = error1;
        } else {
            self.blist[i_max] = b1;
            self.rlist[i_max] = area1;
            self.elist[i_max] = error1;
            self.alist[i_new] = a2;
            self.blist[i_new] = b2;
            self.rlist[i_new] = area2;
            self.elist[i_new] = error2;
        }
        self.level[i_max] = new_level;
        self.level[i_new] = new_level;
        self.size += 1;
        self.maximum_level = self.maximum_level.max(new_level);
        self.sort();
    }

    // Keep `order` sorted by decreasing error, starting the search at nrmax.
    fn sort(&mut self) {
        let last = self.size - 1;
        let mut i_nrmax = self.nrmax;
        let i_maxerr = self.order[i_nrmax];
        if last < 2 {
            self.order[0] = 0;
            self.order[1] = 1;
            self.i = i_maxerr;
            return;
        }
        let errmax = self.elist[i_maxerr];
        while i_nrmax > 0 && errmax > self.elist[self.order[i_nrmax - 1]] {
            self.order[i_nrmax] = self.order[i_nrmax - 1];
            i_nrmax -= 1;
        }
        let top = if last < self.limit / 2 + 2 { last } else { self.limit - last + 1 };
        let mut i = i_nrmax + 1;
        while i < top && errmax < self.elist[self.order[i]] {
            self.order[i - 1] = self.order[i];
            i += 1;
        }
        self.order[i - 1] = i_maxerr;
        let errmin = self.elist[last];
        let mut k = top as isize - 1;
        while k > i as isize - 2 && errmin >= self.elist[self.order[k as usize]] {
            self.order[(k + 1) as usize] = self.order[k as usize];
            k -= 1;
        }
        self.order[(k + 1) as usize] = last;
        self.i = self.order[i_nrmax];
        self.nrmax = i_nrmax;
    }

    fn reset_nrmax(&mut self) {
        self.nrmax = 0;
        self.i = self.order[0];
    }

    fn increase_nrmax(&mut self) -> bool {
        let last = self.size - 1;
        let jupbnd = if last > 1 + self.limit / 2 { self.limit + 1 - last } else { last };
        let id = self.nrmax;
        for _ in id..=jupbnd {
            let i_max = self.order[self.nrmax];
            self.i = i_max;
            if self.level[i_max] < self.maximum_level {
                return true;
            }
            self.nrmax += 1;
        }
        false
    }

    fn large_interval(&self) -> bool {
        self.level[self.i] < self.maximum_level
    }

    fn sum(&self) -> f64 {
        self.rlist[..self.size].iter().sum()
    }
}

fn subinterval_too_small(a1: f64, a2: f64, b2: f64) -> bool {
    let tmp = (1.0 + 100.0 * EPS) * (a2.abs() + 1000.0 * f64::MIN_POSITIVE);
    a1.abs() <= tmp && b2.abs() <= tmp
}

pub(crate) fn qags<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, epsabs: f64, epsrel: f64, limit: usize, rule: &Rule) -> QagsOut {
    let per = evals(rule);
    let limit = limit.max(1);
    let QkOut { result: result0, abserr: abserr0, resabs: resabs0, resasc: resasc0 } = qk(f, a, b, rule);
    let mut neval = per;
    let mut tolerance = epsabs.max(epsrel * result0.abs());
    if abserr0 <= 100.0 * EPS * resabs0 && abserr0 > tolerance {
        return QagsOut { result: result0, abserr: abserr0, neval, status: Status::Roundoff };
    }
    if (abserr0 <= tolerance && abserr0 != resasc0) || abserr0 == 0.0 {
        return QagsOut { result: result0, abserr: abserr0, neval, status: Status::Ok };
    }
    if limit == 1 {
        return QagsOut { result: result0, abserr: abserr0, neval, status: Status::MaxSubdivisions };
    }

    let mut ws = Workspace::new(limit, a, b, result0, abserr0);
    let mut table = EpsilonTable::new();
    table.append(result0);

    let mut area = result0;
    let mut errsum = abserr0;
    let mut res_ext = result0;
    let mut err_ext = f64::MAX;
    let mut correc = 0.0;
    let mut ertest = 0.0;
    let mut error_over_large_intervals = 0.0;
    let (mut roundoff_type1, mut roundoff_type2, mut roundoff_type3) = (0, 0, 0);
    let mut error_type = 0;
    let mut error_type2 = false;
    let mut ktmin = 0;
    let mut extrapolate = false;
    let mut disallow_extrapolation = false;
    let positive_integrand = result0.abs() >= (1.0 - 50.0 * EPS) * resabs0;
    let mut iteration = 1;
    let mut converged_plain = false;

    loop {
        let (a_i, b_i, r_i, e_i) = ws.retrieve();
        let current_level = ws.level[ws.i] + 1;
        let a1 = a_i;
        let b1 = 0.5 * (a_i + b_i);
        let a2 = b1;
        let b2 = b_i;
        iteration += 1;
        let q1 = qk(f, a1, b1, rule);
        let q2 = qk(f, a2, b2, rule);
        neval += 2 * per;
        let area12 = q1.result + q2.result;
        let error12 = q1.abserr + q2.abserr;
        let last_e_i = e_i;
        errsum += error12 - e_i;
        area += area12 - r_i;
        tolerance = epsabs.max(epsrel * area.abs());
        if q1.resasc != q1.abserr && q2.resasc != q2.abserr {
            let delta = r_i - area12;
            if delta.abs() <= 1e-5 * area12.abs() && error12 >= 0.99 * e_i {
                if !extrapolate {
                    roundoff_type1 += 1;
                } else {
                    roundoff_type2 += 1;
                }
            }
            if iteration > 10 && error12 > e_i {
                roundoff_type3 += 1;
            }
        }
        if roundoff_type1 + roundoff_type2 >= 10 || roundoff_type3 >= 20 {
            error_type = 2;
        }
        if roundoff_type2 >= 5 {
            error_type2 = true;
        }
        if subinterval_too_small(a1, a2, b2) {
            error_type = 4;
        }
        ws.update(a1, b1, q1.result, q1.abserr, a2, b2, q2.result, q2.abserr);
        if errsum <= tolerance {
            converged_plain = true;
            break;
        }
        if error_type != 0 {
            break;
        }
        if iteration >= limit - 1 {
            error_type = 1;
            break;
        }
        if iteration == 2 {
            error_over_large_intervals = errsum;
            ertest = tolerance;
            table.append(area);
            continue;
        }
        if disallow_extrapolation {
            continue;
        }
        error_over_large_intervals -= last_e_i;
        if current_level < ws.maximum_level {
            error_over_large_intervals += error12;
        }
        if !extrapolate {
            if ws.large_interval() {
                continue;
            }
            extrapolate = true;
            ws.nrmax = 1;
        }
        if !error_type2 && error_over_large_intervals > ertest && ws.increase_nrmax() {
            continue;
        }
        table.append(area);
        let (reseps, abseps) = table.extrapolate();
        ktmin += 1;
        if ktmin > 5 && err_ext < 1e-3 * errsum {
            error_type = 5;
        }
        if abseps < err_ext {
            ktmin = 0;
            err_ext = abseps;
            res_ext = reseps;
            correc = error_over_large_intervals;
            ertest = epsabs.max(epsrel * reseps.abs());
            if err_ext <= ertest {
                break;
            }
        }
        if table.n == 1 {
            disallow_extrapolation = true;
        }
        if error_type == 5 {
            break;
        }
        ws.reset_nrmax();
        extrapolate = false;
        error_over_large_intervals = errsum;
    }

    let finish = |error_type: i32, result: f64, abserr: f64| {
        let status = match if error_type > 2 { error_type - 1 } else { error_type } {
            0 => Status::Ok,
            1 => Status::MaxSubdivisions,
            2 => Status::Roundoff,
            3 => Status::BadIntegrand,
            4 => Status::ExtrapolationRoundoff,
            _ => Status::Divergent,
        };
        QagsOut { result, abserr, neval, status }
    };

    if converged_plain || err_ext == f64::MAX {
        return finish(error_type, ws.sum(), errsum);
    }
    let mut error_type = error_type;
    if error_type != 0 || error_type2 {
        if error_type2 {
            err_ext += correc;
        }
        if error_type == 0 {
            error_type = 3;
        }
        if res_ext != 0.0 && area != 0.0 {
            if err_ext / res_ext.abs() > errsum / area.abs() {
                return finish(error_type, ws.sum(), errsum);
            }
        } else if err_ext > errsum {
            return finish(error_type, ws.sum(), errsum);
        } else if area == 0.0 {
            return finish(error_type, res_ext, err_ext);
        }
    }
    let max_area = res_ext.abs().max(area.abs());
    if !positive_integrand && max_area < 0.01 * resabs0 {
        return finish(error_type, res_ext, err_ext);
    }
    let ratio = res_ext / area;
    if !(0.01..=100.0).contains(&ratio) || errsum > area.abs() {
        error_type = 6;
    }
    finish(error_type, res_ext, err_ext)
}

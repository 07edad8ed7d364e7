//! One- and two-dimensional derivative-free search used by the radius and
//! geometry modules: periodic grid scans with golden-section refinement, and
//! a restarted Nelder–Mead simplex on the plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::par;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`. Returns the
/// best abscissa seen and its value.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, width_tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    // 200 iterations shrink any bracket below double resolution.
    for _ in 0..200 {
        if hi - lo <= width_tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// Brent's method (golden section with parabolic steps) for a maximum of
/// `f` on `[lo, hi]`. Converges superlinearly on smooth peaks and falls back
/// to golden-section steps elsewhere.
pub fn brent_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, width_tol: f64) -> (f64, f64) {
    const CGOLD: f64 = 1.0 - INV_PHI;
    let (mut a, mut b) = (lo, hi);
    let mut x = a + CGOLD * (b - a);
    let (mut w, mut v) = (x, x);
    // Work with g = -f so the textbook minimization reads unchanged.
    let mut fx = -f(x);
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e) = (0.0_f64, 0.0_f64);
    for _ in 0..200 {
        let xm = 0.5 * (a + b);
        let tol1 = 0.5 * width_tol + f64::EPSILON.sqrt() * 1e-3 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = -f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    (x, -fx)
}

/// One-dimensional refinement used on each candidate bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// Plain golden-section search.
    #[default]
    GoldenSection,
    /// Golden section accelerated by parabolic interpolation.
    Brent,
}

/// Grid sizes at or above this are scanned through [`par`]; smaller scans
/// are cheaper sequentially than the scheduling overhead.
const PARALLEL_GRID_MIN: usize = 256;

/// Settings for [`maximize_periodic`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicSearch {
    /// Uniform grid size over `[0, 2π)`.
    pub grid_points: usize,
    /// Grid points within `max(margin, rel_margin·|gridmax|)` of the grid
    /// maximum are refinement candidates.
    pub margin: f64,
    pub rel_margin: f64,
    /// Golden-section stops once the bracket is narrower than this.
    pub width_tol: f64,
    /// Adjacent grid values closer than this (relative) form one plateau.
    pub flat_tol: f64,
    pub refinement: Refinement,
}

/// One refined local maximum of a periodic function.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicPeak {
    pub theta: f64,
    pub value: f64,
    /// Extra grid angles on the same plateau (empty for an isolated peak).
    pub plateau: Vec<f64>,
}

pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI {
        0.0
    } else {
        t
    }
}

/// Maximize a `2π`-periodic function. The grid is scanned (in parallel when
/// enabled), grid values within `margin` of the grid maximum are grouped
/// into plateau segments, every segment that is a local maximum of the grid
/// is refined by golden-section search on `[θ - h, θ + h]`. Peaks are
/// returned best first.
pub fn maximize_periodic<F>(f: F, search: &PeriodicSearch) -> Vec<PeriodicPeak>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let n = search.grid_points.max(3);
    let h = 2.0 * PI / n as f64;
    let values = if n >= PARALLEL_GRID_MIN {
        par::map_range(n, |k| f(k as f64 * h))
    } else {
        (0..n).map(|k| f(k as f64 * h)).collect()
    };
    let grid_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let flat = search.flat_tol * grid_max.abs().max(1.0);
    let threshold = grid_max - search.margin.max(search.rel_margin * grid_max.abs()).max(flat);

    // Plateau segments: maximal circular runs of neighbours within `flat`.
    let break_at = |k: usize| (values[k] - values[(k + n - 1) % n]).abs() > flat;
    let first_break = (0..n).find(|&k| break_at(k));
    let segments: Vec<Vec<usize>> = match first_break {
        None => vec![(0..n).collect()],
        Some(b) => {
            let mut segs: Vec<Vec<usize>> = Vec::new();
            for off in 0..n {
                let k = (b + off) % n;
                if off == 0 || break_at(k) {
                    segs.push(Vec::new());
                }
                segs.last_mut().expect("segment").push(k);
            }
            segs
        }
    };

    let seg_value = |s: &Vec<usize>| s.iter().map(|&k| values[k]).fold(f64::NEG_INFINITY, f64::max);
    let m = segments.len();
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    for (i, seg) in segments.iter().enumerate() {
        let v = seg_value(seg);
        if v < threshold {
            continue;
        }
        let is_local_max = m == 1 || {
            let prev = seg_value(&segments[(i + m - 1) % m]);
            let next = seg_value(&segments[(i + 1) % m]);
            v >= prev && v >= next
        };
        if is_local_max {
            candidates.push((i, v));
        }
    }

    let refine_one = |&(i, _): &(usize, f64)| {
        let seg = &segments[i];
        let best = *seg
            .iter()
            .max_by(|&&a, &&b| values[a].total_cmp(&values[b]))
            .expect("nonempty segment");
        let center = best as f64 * h;
        let (t, v) = match search.refinement {
            Refinement::GoldenSection => golden_section_max(&f, center - h, center + h, search.width_tol),
            Refinement::Brent => brent_max(&f, center - h, center + h, search.width_tol),
        };
        let (theta, value) = if v >= values[best] {
            (wrap_angle(t), v)
        } else {
            (center, values[best])
        };
        let plateau = if seg.len() > 1 {
            let take = seg.len().min(8);
            (0..take).map(|j| seg[j * seg.len() / take] as f64 * h).collect()
        } else {
            Vec::new()
        };
        PeriodicPeak { theta, value, plateau }
    };
    let mut refined: Vec<PeriodicPeak> = if n >= PARALLEL_GRID_MIN {
        par::map_slice(&candidates, refine_one)
    } else {
        candidates.iter().map(refine_one).collect()
    };
    refined.sort_by(|a, b| b.value.total_cmp(&a.value));
    refined
}

/// Result of a planar Nelder–Mead run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarMin {
    pub point: [f64; 2],
    pub value: f64,
    pub evaluations: usize,
}

/// Nelder–Mead on `ℝ²` started from `start` with initial edge `step`,
/// stopped when the simplex diameter falls below `diam_tol`. Restarted from
/// the incumbent with a fresh simplex until a restart no longer improves.
pub fn nelder_mead_2d<F: Fn([f64; 2]) -> f64>(
    f: F,
    start: [f64; 2],
    step: f64,
    diam_tol: f64,
    max_evals: usize,
) -> PlanarMin {
    let mut best = PlanarMin {
        point: start,
        value: f(start),
        evaluations: 1,
    };
    let mut step = step;
    for _ in 0..8 {
        let run = nelder_mead_once(
            &f,
            best.point,
            best.value,
            step,
            diam_tol,
            max_evals.saturating_sub(best.evaluations),
        );
        let improved = run.value < best.value - 1e-15 * best.value.abs().max(1.0);
        best.evaluations += run.evaluations;
        if run.value <= best.value {
            best.point = run.point;
            best.value = run.value;
        }
        if !improved || best.evaluations >= max_evals {
            break;
        }
        step = (step * 0.1).max(diam_tol * 10.0);
    }
    best
}

fn nelder_mead_once<F: Fn([f64; 2]) -> f64>(
    f: &F,
    start: [f64; 2],
    f_start: f64,
    step: f64,
    diam_tol: f64,
    max_evals: usize,
) -> PlanarMin {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let evals = std::cell::Cell::new(0usize);
    let eval = |p: [f64; 2]| {
        evals.set(evals.get() + 1);
        f(p)
    };
    let mut simplex = [
        (start, f_start),
        ([start[0] + step, start[1]], 0.0),
        ([start[0], start[1] + step], 0.0),
    ];
    simplex[1].1 = eval(simplex[1].0);
    simplex[2].1 = eval(simplex[2].0);

    let dist = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diam = dist(simplex[0].0, simplex[1].0)
            .max(dist(simplex[0].0, simplex[2].0))
            .max(dist(simplex[1].0, simplex[2].0));
        if diam < diam_tol || evals.get() >= max_evals {
            break;
        }
        let (b, g, w) = (simplex[0], simplex[1], simplex[2]);
        let centroid = [(b.0[0] + g.0[0]) / 2.0, (b.0[1] + g.0[1]) / 2.0];
        let along = |t: f64| {
            [
                centroid[0] + t * (w.0[0] - centroid[0]),
                centroid[1] + t * (w.0[1] - centroid[1]),
            ]
        };

        let xr = along(-ALPHA);
        let fr = eval(xr);
        if fr < b.1 {
            let xe = along(-GAMMA);
            let fe = eval(xe);
            simplex[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < g.1 {
            simplex[2] = (xr, fr);
        } else {
            let (xc, fc) = if fr < w.1 {
                let xc = along(-RHO);
                (xc, eval(xc))
            } else {
                let xc = along(RHO);
                (xc, eval(xc))
            };
            if fc < w.1.min(fr) {
                simplex[2] = (xc, fc);
            } else {
                for vertex in simplex.iter_mut().skip(1) {
                    let p = [
                        b.0[0] + SIGMA * (vertex.0[0] - b.0[0]),
                        b.0[1] + SIGMA * (vertex.0[1] - b.0[1]),
                    ];
                    *vertex = (p, eval(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    PlanarMin {
        point: simplex[0].0,
        value: simplex[0].1,
        evaluations: evals.get(),
    }
}

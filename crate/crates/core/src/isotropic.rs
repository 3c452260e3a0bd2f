//! Exact q-concurrence on the isotropic family `rho_F`.
//!
//! The value is the lower convex envelope in `F` of
//!
//! ```text
//! xi(F, q, d) = 1 - gamma^(2q) - (d-1) delta^(2q)
//! gamma = (sqrt(F) + sqrt((d-1)(1-F))) / sqrt(d)
//! delta = (sqrt(F) - sqrt((1-F)/(d-1))) / sqrt(d)
//! ```
//!
//! extended by zero on `[0, 1/d]`. [`envelope`] computes it numerically for
//! any `q`; [`c2_isotropic_closed_form`] is the analytic `q = 2` answer.

use serde::Serialize;

use crate::error::{QcError, Result};
use crate::monotone::QExponent;
use crate::output::{csv, fmt_sig};
use crate::par::Execution;

pub const DEFAULT_GRID: usize = 2001;
pub const MIN_GRID: usize = 101;

fn check_args(f: f64, d: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&f) {
        return Err(QcError::BadFidelity(f));
    }
    if d < 2 {
        return Err(QcError::BadDimension(format!("need d >= 2, got {d}")));
    }
    Ok(())
}

fn xi_unchecked(f: f64, q: f64, d: usize) -> f64 {
    let df = d as f64;
    if f <= 1.0 / df {
        return 0.0;
    }
    let gamma = (f.sqrt() + ((df - 1.0) * (1.0 - f)).sqrt()) / df.sqrt();
    let delta = (f.sqrt() - ((1.0 - f) / (df - 1.0)).sqrt()) / df.sqrt();
    (1.0 - gamma.powf(2.0 * q) - (df - 1.0) * delta.powf(2.0 * q)).max(0.0)
}

/// `xi(F, q, d)`, zero for `F <= 1/d`.
pub fn xi(f: f64, q: QExponent, d: usize) -> Result<f64> {
    check_args(f, d)?;
    Ok(xi_unchecked(f, q.value(), d))
}

/// Brute-force minimum of `1 - n gamma^(2q) - m delta^(2q)` over the
/// two-level Schmidt profiles with `n gamma^2 + m delta^2 = 1` and
/// `n gamma + m delta = sqrt(F d)`, `1 <= n <= floor(F d)`, `n + m <= d`.
pub fn xi_oracle(f: f64, q: QExponent, d: usize) -> Result<f64> {
    check_args(f, d)?;
    let df = d as f64;
    if f <= 1.0 / df {
        return Ok(0.0);
    }
    let q = q.value();
    let s = (f * df).sqrt();
    let n_max = ((f * df) + 1e-12).floor() as usize;
    let mut best = f64::INFINITY;
    for n in 1..=n_max.min(d) {
        let nf = n as f64;
        for m in 0..=(d - n) {
            if m == 0 {
                // only gamma = 1/sqrt(n), feasible iff n = F d
                if (nf.sqrt() - s).abs() <= 1e-9 {
                    best = best.min(1.0 - nf * (1.0 / nf).powf(q));
                }
                continue;
            }
            let mf = m as f64;
            let disc = nf * mf * (nf + mf - f * df);
            if disc < -1e-12 {
                continue;
            }
            let root = disc.max(0.0).sqrt();
            for gamma in [
                (nf * s + root) / (nf * (nf + mf)),
                (nf * s - root) / (nf * (nf + mf)),
            ] {
                let delta = (s - nf * gamma) / mf;
                if gamma < -1e-12 || delta < -1e-12 {
                    continue;
                }
                let (g, dl) = (gamma.max(0.0), delta.max(0.0));
                best = best.min(1.0 - nf * g.powf(2.0 * q) - mf * dl.powf(2.0 * q));
            }
        }
    }
    if best.is_finite() {
        Ok(best.max(0.0))
    } else {
        Err(QcError::NoFeasibleVertex { f, d })
    }
}

/// The `q = 2` value in closed form.
pub fn c2_isotropic_closed_form(f: f64, d: usize) -> Result<f64> {
    check_args(f, d)?;
    let df = d as f64;
    let knee = 4.0 * (df - 1.0) / (df * df);
    Ok(if f <= 1.0 / df {
        0.0
    } else if f <= knee {
        xi_unchecked(f, 2.0, d)
    } else {
        (df * f - df) / (df - 1.0) + (df - 1.0) / df
    })
}

/// Lower convex envelope sampled on a uniform grid over `[0, 1]`.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeCurve {
    pub d: usize,
    pub q: f64,
    /// `(F, value)` with `F` ascending.
    pub grid: Vec<(f64, f64)>,
    /// Vertices of the lower hull, `F` ascending.
    #[serde(skip)]
    hull: Vec<(f64, f64)>,
}

impl EnvelopeCurve {
    /// Envelope at any `F` in `[0, 1]` by interpolation between hull
    /// vertices.
    pub fn value_at(&self, f: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&f) {
            return Err(QcError::BadFidelity(f));
        }
        Ok(interpolate(&self.hull, f))
    }

    pub fn hull(&self) -> &[(f64, f64)] {
        &self.hull
    }

    /// `F,value` rows at `digits` significant digits.
    pub fn to_csv(&self, digits: usize) -> String {
        csv(
            "F,value",
            self.grid
                .iter()
                .map(|&(f, v)| vec![fmt_sig(f, digits), fmt_sig(v, digits)]),
        )
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain, lower half. Input sorted by `x`.
fn lower_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn interpolate(hull: &[(f64, f64)], x: f64) -> f64 {
    let i = hull.partition_point(|p| p.0 < x);
    if i == 0 {
        return hull[0].1;
    }
    if i == hull.len() {
        return hull[hull.len() - 1].1;
    }
    let (a, b) = (hull[i - 1], hull[i]);
    if b.0 == a.0 {
        return b.1;
    }
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

/// Sample-and-hull envelope. After the first hull, every vertex bordering
/// a segment longer than `2 / grid_points` is resampled on a 64-point grid
/// spanning its two neighbouring cells and the hull is rebuilt.
pub fn envelope(
    q: QExponent,
    d: usize,
    grid_points: usize,
    exec: Execution,
) -> Result<EnvelopeCurve> {
    if grid_points < MIN_GRID {
        return Err(QcError::BadGrid {
            got: grid_points,
            min: MIN_GRID,
        });
    }
    if d < 2 {
        return Err(QcError::BadDimension(format!("need d >= 2, got {d}")));
    }
    let qv = q.value();
    let top = 1.0 - (d as f64).powf(1.0 - qv);
    let h = 1.0 / (grid_points - 1) as f64;
    let sample = |f: f64| {
        if f >= 1.0 {
            top
        } else {
            xi_unchecked(f, qv, d)
        }
    };
    let xs: Vec<f64> = (0..grid_points).map(|i| i as f64 * h).collect();
    let mut points: Vec<(f64, f64)> = exec.map_slice(&xs, |&f| (f, sample(f)));
    let hull = lower_hull(&points);

    let mut extra = Vec::new();
    for (i, v) in hull.iter().enumerate() {
        let wide_left = i > 0 && v.0 - hull[i - 1].0 > 2.0 * h;
        let wide_right = i + 1 < hull.len() && hull[i + 1].0 - v.0 > 2.0 * h;
        if wide_left || wide_right {
            let lo = (v.0 - h).max(0.0);
            let hi = (v.0 + h).min(1.0);
            extra.extend((1..64).map(|k| lo + (hi - lo) * k as f64 / 64.0));
        }
    }
    if !extra.is_empty() {
        points.extend(exec.map_slice(&extra, |&f| (f, sample(f))));
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        points.dedup_by(|a, b| a.0 == b.0);
    }
    let hull = lower_hull(&points);
    let grid = xs.iter().map(|&f| (f, interpolate(&hull, f))).collect();
    Ok(EnvelopeCurve {
        d,
        q: qv,
        grid,
        hull,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1Row {
    pub d: usize,
    pub f: f64,
    pub c2_exact: f64,
    pub lower_bound: f64,
}

/// Rows `(d, F, C_2 closed form, (dF - 1)^2 / (d^2 - d))` on `resolution`
/// evenly spaced fidelities in `[1/d, 1]` for each `d`.
pub fn fig1_data(
    d_range: std::ops::RangeInclusive<usize>,
    resolution: usize,
    exec: Execution,
) -> Result<Vec<Fig1Row>> {
    if *d_range.start() < 2 || *d_range.end() > 10 || d_range.is_empty() {
        return Err(QcError::BadRange(format!(
            "dimension range {}..={} must lie in 2..=10",
            d_range.start(),
            d_range.end()
        )));
    }
    if resolution < 2 {
        return Err(QcError::BadGrid {
            got: resolution,
            min: 2,
        });
    }
    let cells: Vec<(usize, usize)> = d_range
        .flat_map(|d| (0..resolution).map(move |k| (d, k)))
        .collect();
    exec.map_slice(&cells, |&(d, k)| {
        let df = d as f64;
        let f = if k + 1 == resolution {
            1.0
        } else {
            1.0 / df + (1.0 - 1.0 / df) * k as f64 / (resolution - 1) as f64
        };
        let num = (df * f - 1.0).max(0.0);
        Ok(Fig1Row {
            d,
            f,
            c2_exact: c2_isotropic_closed_form(f, d)?,
            lower_bound: num * num / (df * df - df),
        })
    })
    .into_iter()
    .collect()
}

/// CSV with header `d,F,c2_exact,lower_bound`, 6 significant digits.
pub fn fig1_csv(rows: &[Fig1Row]) -> String {
    csv(
        "d,F,c2_exact,lower_bound",
        rows.iter().map(|r| {
            vec![
                r.d.to_string(),
                fmt_sig(r.f, 6),
                fmt_sig(r.c2_exact, 6),
                fmt_sig(r.lower_bound, 6),
            ]
        }),
    )
}

//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 15-point Kronrod rule with the embedded 7-point Gauss rule supplies the
//! per-interval error estimate; the interval with the largest estimate is
//! bisected until the summed error meets the requested tolerance or the
//! subdivision budget runs out. Semi-infinite integrals are mapped onto
//! [0, 1) with u = L + t/(1 - t) instead of guessing a cutoff.

use std::collections::BinaryHeap;

use crate::error::{CoreError, Result};

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
                constraint: "must be > 0",
            });
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(CoreError::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                constraint: "must be > 0",
            });
        }
        if self.max_subdivisions < 1 {
            return Err(CoreError::InvalidParameter {
                name: "max_subdivisions",
                value: self.max_subdivisions as f64,
                constraint: "must be >= 1",
            });
        }
        Ok(())
    }
}

/// Value plus the achieved error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights, with the
// embedded 7-point Gauss weights. Standard QUADPACK constants.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// One G7K15 evaluation: returns (kronrod value, error estimate).
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

#[derive(Debug)]
struct Interval {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrate `f` over the finite interval [a, b].
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }

    let (v0, e0) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval {
        err: e0,
        a,
        b,
        value: v0,
    });
    let mut total_value = v0;
    let mut total_err = e0;
    let mut subdivisions = 0usize;

    loop {
        let tol = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_err <= tol {
            break;
        }
        if subdivisions >= spec.max_subdivisions || !total_value.is_finite() {
            return Err(CoreError::QuadratureNonConvergence {
                value: total_value,
                error_estimate: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap cannot be empty while error > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable at f64 resolution
            return Err(CoreError::QuadratureNonConvergence {
                value: total_value,
                error_estimate: total_err,
                subdivisions,
            });
        }
        let (vl, el) = gk15(&mut f, worst.a, mid);
        let (vr, er) = gk15(&mut f, mid, worst.b);
        total_value += vl + vr - worst.value;
        total_err += el + er - worst.err;
        heap.push(Interval {
            err: el,
            a: worst.a,
            b: mid,
            value: vl,
        });
        heap.push(Interval {
            err: er,
            a: mid,
            b: worst.b,
            value: vr,
        });
        subdivisions += 1;
    }

    Ok(QuadResult {
        value: total_value,
        error_estimate: total_err,
        subdivisions,
    })
}

/// Integrate `f` over [lower, inf) via the substitution u = lower + t/(1-t).
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let om = 1.0 - t;
            let u = lower + t / om;
            f(u) / (om * om)
        },
        0.0,
        1.0,
        spec,
    )
}

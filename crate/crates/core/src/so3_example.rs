//! The SO(3) / SO(2) expansion groups checked against closed forms:
//! `G^(0)` against ISO(2) composition and the order-1 product against
//! `(v + v̂, w + ŵ + ½ π(v × v̂))`.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{so3, span_subalgebra, AlgVector};
use crate::bch::{ExpansionGroup, GroupElement, HElement, NilTuple};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sample::Sampler;
use crate::scalar::{int, ratio, Field, Rational};

/// Float tolerance for arbitrary rotation angles.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// One comparison in an example report.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleCheck {
    pub name: String,
    pub samples: usize,
    pub mismatches: usize,
    /// Largest componentwise deviation, for float checks.
    pub max_error: Option<f64>,
}

impl ExampleCheck {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub order: usize,
    pub checks: Vec<ExampleCheck>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(ExampleCheck::passed)
    }
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "so3 expansion group, order {}", self.order)?;
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            write!(f, "  {status:6} {} ({} samples, {} mismatches", c.name, c.samples, c.mismatches)?;
            if let Some(e) = c.max_error {
                write!(f, ", max error {e:.3e}")?;
            }
            writeln!(f, ")")?;
        }
        Ok(())
    }
}

/// The expansion group of so(3) along rotations about the x3 axis.
pub fn so3_group(k: usize) -> Result<ExpansionGroup> {
    let g = so3();
    let split = span_subalgebra(&g, &[AlgVector::from_ints(&[0, 0, 1])])?;
    ExpansionGroup::new(g, split, k)
}

/// Rotation about x3 by `turns` quarter turns, exactly.
pub fn quarter_turn(turns: i64) -> Matrix {
    let (c, s) = match turns.rem_euclid(4) {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    Matrix::from_rows(vec![
        vec![int(c), int(-s), int(0)],
        vec![int(s), int(c), int(0)],
        vec![int(0), int(0), int(1)],
    ])
    .expect("3x3")
}

pub fn rotation_f64(theta: f64) -> Matrix<f64> {
    let (s, c) = theta.sin_cos();
    Matrix::from_rows(vec![vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]).expect("3x3")
}

/// For so(3), `Ad_R = R` in the basis X1, X2, X3.
pub fn rotation_element<T: Field>(r: Matrix<T>) -> HElement<T> {
    HElement::new(r.clone(), Some(r))
}

/// An ISO(2) element `(R, t)`, R a 2×2 rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct Iso2<T> {
    pub rot: [[T; 2]; 2],
    pub t: [T; 2],
}

impl<T: Field> Iso2<T> {
    pub fn compose(&self, other: &Self) -> Self {
        let r = &self.rot;
        let mul = |i: usize, j: usize| {
            r[i][0].clone() * other.rot[0][j].clone() + r[i][1].clone() * other.rot[1][j].clone()
        };
        let rt = |i: usize| r[i][0].clone() * other.t[0].clone() + r[i][1].clone() * other.t[1].clone();
        Self {
            rot: [[mul(0, 0), mul(0, 1)], [mul(1, 0), mul(1, 1)]],
            t: [self.t[0].clone() + rt(0), self.t[1].clone() + rt(1)],
        }
    }

    /// `(diag(R, 1), t)` in `G^(0)`.
    pub fn to_group(&self) -> GroupElement<T> {
        let z = T::zero();
        let m = Matrix::from_rows(vec![
            vec![self.rot[0][0].clone(), self.rot[0][1].clone(), z.clone()],
            vec![self.rot[1][0].clone(), self.rot[1][1].clone(), z.clone()],
            vec![z.clone(), z.clone(), T::one()],
        ])
        .expect("3x3");
        GroupElement {
            h: rotation_element(m),
            nil: NilTuple {
                mids: Vec::new(),
                top: AlgVector(vec![self.t[0].clone(), self.t[1].clone(), z]),
            },
        }
    }

    fn from_rotation(m: &Matrix<T>, t: [T; 2]) -> Self {
        Self {
            rot: [[m[(0, 0)].clone(), m[(0, 1)].clone()], [m[(1, 0)].clone(), m[(1, 1)].clone()]],
            t,
        }
    }
}

fn max_deviation<T: Field>(a: &GroupElement<T>, b: &GroupElement<T>) -> f64 {
    let mut err = a.h.ad.max_abs_diff(&b.h.ad).max(a.nil.max_abs_diff(&b.nil));
    if let (Some(x), Some(y)) = (&a.h.defining, &b.h.defining) {
        err = err.max(x.max_abs_diff(y));
    }
    err
}

/// `(v + v̂, w + ŵ + ½ π(v × v̂))`, with the cross product written out.
pub fn order_one_closed_form(v: &AlgVector, w: &AlgVector, vh: &AlgVector, wh: &AlgVector) -> (AlgVector, AlgVector) {
    let (a, b) = (&v.0, &vh.0);
    let cross = [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ];
    let half = ratio(1, 2);
    let top = AlgVector(vec![
        &w.0[0] + &wh.0[0] + &half * &cross[0],
        &w.0[1] + &wh.0[1] + &half * &cross[1],
        Rational::zero(),
    ]);
    (v + vh, top)
}

/// Runs the comparison for `k ∈ {0, 1}`.
pub fn so3_example(k: usize, seed: u64) -> Result<ExampleReport> {
    match k {
        0 => order_zero(seed),
        1 => order_one(seed),
        _ => Err(Error::InvalidArgument(format!(
            "the so3 example is available for orders 0 and 1, got {k}"
        ))),
    }
}

fn order_zero(seed: u64) -> Result<ExampleReport> {
    let grp = so3_group(0)?;
    let mut sampler = Sampler::new(seed);

    let mut exact = ExampleCheck {
        name: "G(0) product equals ISO(2) composition at quarter turns (exact)".into(),
        samples: 0,
        mismatches: 0,
        max_error: None,
    };
    let hand = Iso2::from_rotation(&quarter_turn(1), [int(0), int(0)])
        .compose(&Iso2::from_rotation(&Matrix::identity(3), [int(1), int(0)]));
    if hand.t != [int(0), int(1)] {
        exact.mismatches += 1;
    }
    for i in 0..4 {
        for j in 0..4 {
            for _ in 0..4 {
                let a = Iso2::from_rotation(&quarter_turn(i), [sampler.rational(), sampler.rational()]);
                let b = Iso2::from_rotation(&quarter_turn(j), [sampler.rational(), sampler.rational()]);
                let prod = grp.group_mult(&a.to_group(), &b.to_group())?;
                exact.samples += 1;
                if prod != a.compose(&b).to_group() {
                    exact.mismatches += 1;
                }
            }
        }
    }

    let mut float = ExampleCheck {
        name: format!("G(0) product equals ISO(2) composition at random angles (tol {FLOAT_TOLERANCE:e})"),
        samples: 0,
        mismatches: 0,
        max_error: Some(0.0),
    };
    let tau = std::f64::consts::TAU;
    for _ in 0..1000 {
        let mk = |s: &mut Sampler| {
            let r = rotation_f64(s.float(0.0, tau));
            Iso2::from_rotation(&r, [s.float(-10.0, 10.0), s.float(-10.0, 10.0)])
        };
        let a = mk(&mut sampler);
        let b = mk(&mut sampler);
        let prod = grp.group_mult(&a.to_group(), &b.to_group())?;
        let err = max_deviation(&prod, &a.compose(&b).to_group());
        float.samples += 1;
        float.max_error = float.max_error.map(|m| m.max(err));
        if err > FLOAT_TOLERANCE {
            float.mismatches += 1;
        }
    }

    Ok(ExampleReport {
        order: 0,
        checks: vec![exact, float],
    })
}

fn order_one(seed: u64) -> Result<ExampleReport> {
    let grp = so3_group(1)?;
    let mut sampler = Sampler::new(seed);
    let run = |name: &str, cases: Vec<[AlgVector; 4]>| -> Result<ExampleCheck> {
        let mut check = ExampleCheck {
            name: name.into(),
            samples: 0,
            mismatches: 0,
            max_error: None,
        };
        for [v, w, vh, wh] in cases {
            let a = grp.nil_tuple(vec![v.clone()], w.clone())?;
            let b = grp.nil_tuple(vec![vh.clone()], wh.clone())?;
            let got = grp.star(&a, &b)?;
            let (mid, top) = order_one_closed_form(&v, &w, &vh, &wh);
            check.samples += 1;
            if got.mids != vec![mid] || got.top != top {
                check.mismatches += 1;
            }
        }
        Ok(check)
    };
    let e = |x: &[i64]| AlgVector::from_ints(x);
    let spot = run(
        "hand-evaluated products: v x v-hat along x3, then along x2",
        vec![
            [e(&[1, 0, 0]), e(&[0, 0, 0]), e(&[0, 1, 0]), e(&[0, 0, 0])],
            [e(&[0, 0, 1]), e(&[0, 0, 0]), e(&[1, 0, 0]), e(&[0, 0, 0])],
        ],
    )?;
    let random: Vec<[AlgVector; 4]> = (0..100)
        .map(|_| {
            let mut w = || {
                let mut x = sampler.vector(3);
                x.0[2] = Rational::zero();
                x
            };
            let (w1, w2) = (w(), w());
            [sampler.vector(3), w1, sampler.vector(3), w2]
        })
        .collect();
    let random = run("star equals (v + v-hat, w + w-hat + 1/2 pi(v x v-hat)) on random rationals", random)?;
    // The second hand case contributes (0, 1/2) to the w-slot.
    let a = grp.nil_tuple(vec![e(&[0, 0, 1])], e(&[0, 0, 0]))?;
    let b = grp.nil_tuple(vec![e(&[1, 0, 0])], e(&[0, 0, 0]))?;
    let top = grp.star(&a, &b)?.top;
    let half = ExampleCheck {
        name: "v = X3, v-hat = X1 gives w-slot (0, 1/2)".into(),
        samples: 1,
        mismatches: usize::from(top != AlgVector(vec![Rational::zero(), ratio(1, 2), Rational::zero()])),
        max_error: None,
    };
    Ok(ExampleReport {
        order: 1,
        checks: vec![spot, half, random],
    })
}

#![allow(dead_code)]

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// 256-bit arithmetic for oracle evaluations.
pub struct Big {
    cc: RefCell<Consts>,
}

pub type B = BigFloat;

impl Big {
    pub fn new() -> Self {
        Big { cc: RefCell::new(Consts::new().expect("constants cache")) }
    }

    pub fn n(&self, x: f64) -> B {
        BigFloat::from_f64(x, PREC)
    }

    pub fn add(&self, a: &B, b: &B) -> B {
        a.add(b, PREC, RM)
    }

    pub fn sub(&self, a: &B, b: &B) -> B {
        a.sub(b, PREC, RM)
    }

    pub fn mul(&self, a: &B, b: &B) -> B {
        a.mul(b, PREC, RM)
    }

    pub fn div(&self, a: &B, b: &B) -> B {
        a.div(b, PREC, RM)
    }

    pub fn prod(&self, xs: &[&B]) -> B {
        xs.iter().fold(self.n(1.0), |acc, x| self.mul(&acc, x))
    }

    pub fn pow(&self, a: &B, e: &B) -> B {
        a.pow(e, PREC, RM, &mut self.cc.borrow_mut())
    }

    pub fn powf(&self, a: &B, e: f64) -> B {
        let e = self.n(e);
        self.pow(a, &e)
    }

    /// `a^(num/den)` with the exponent formed exactly in 256 bits.
    pub fn pow_ratio(&self, a: &B, num: f64, den: f64) -> B {
        let e = self.div(&self.n(num), &self.n(den));
        self.pow(a, &e)
    }

    pub fn exp(&self, a: &B) -> B {
        a.exp(PREC, RM, &mut self.cc.borrow_mut())
    }

    pub fn ln(&self, a: &B) -> B {
        a.ln(PREC, RM, &mut self.cc.borrow_mut())
    }

    pub fn log2(&self, a: &B) -> B {
        a.log2(PREC, RM, &mut self.cc.borrow_mut())
    }

    pub fn sqrt(&self, a: &B) -> B {
        a.sqrt(PREC, RM)
    }

    pub fn cos(&self, a: &B) -> B {
        a.cos(PREC, RM, &mut self.cc.borrow_mut())
    }

    pub fn pi(&self) -> B {
        self.cc.borrow_mut().pi(PREC, RM)
    }

    /// `cos(deg)` with the radian conversion carried out in 256 bits.
    pub fn cos_deg(&self, deg: f64) -> B {
        let pi = self.pi();
        let rad = self.div(&self.mul(&self.n(deg), &pi), &self.n(180.0));
        self.cos(&rad)
    }

    pub fn f(&self, a: &B) -> f64 {
        a.format(Radix::Dec, RM, &mut self.cc.borrow_mut())
            .expect("decimal rendering")
            .parse()
            .expect("parsable decimal")
    }
}

/// Relative difference, falling back to absolute near zero.
pub fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

#[track_caller]
pub fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    assert!(rel(got, want) <= tol, "{what}: got {got:e}, oracle {want:e}, rel {:e}", rel(got, want));
}

/// `n` deterministic draws from `strategy`.
pub fn draws<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let seed = [7u8; 32];
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &seed));
    (0..n).map(|_| strategy.new_tree(&mut runner).expect("strategy").current()).collect()
}

/// Composite trapezoid with `n` uniform intervals per piece.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, pieces: &[(f64, f64, usize)]) -> f64 {
    let mut total = 0.0;
    for &(a, b, n) in pieces {
        let h = (b - a) / n as f64;
        let mut s = 0.5 * (f(a) + f(b));
        for i in 1..n {
            s += f(a + h * i as f64);
        }
        total += s * h;
    }
    total
}

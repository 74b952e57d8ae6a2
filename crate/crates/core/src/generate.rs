//! Random closed terms, built type-directed so that most of them check.
//! Used by the property tests and the soundness probes.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::checker::{CheckReport, Checker};
use crate::encoder::encode_nat;
use crate::syntax::{Context, Term};

/// Simple types without bounds; the checker fills those in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Unit,
    Sum(Box<Shape>, Box<Shape>),
    Prod(Box<Shape>, Box<Shape>),
    Fun(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn sum(a: Shape, b: Shape) -> Shape {
        Shape::Sum(Box::new(a), Box::new(b))
    }

    fn prod(a: Shape, b: Shape) -> Shape {
        Shape::Prod(Box::new(a), Box::new(b))
    }

    fn fun(a: Shape, b: Shape) -> Shape {
        Shape::Fun(Box::new(a), Box::new(b))
    }

    fn first_order(&self) -> bool {
        match self {
            Shape::Unit => true,
            Shape::Sum(a, b) | Shape::Prod(a, b) => a.first_order() && b.first_order(),
            Shape::Fun(..) => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Budget for the nesting of generated constructors.
    pub max_depth: u32,
    /// Largest iteration count handed to `rec`.
    pub max_rec_count: u64,
    /// Allow lambdas whose argument is itself a function.
    pub higher_order: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 5,
            max_rec_count: 3,
            higher_order: true,
        }
    }
}

pub struct TermGenerator {
    rng: StdRng,
    config: GenConfig,
    checker: Checker,
    counter: usize,
}

impl TermGenerator {
    pub fn new(seed: u64) -> Self {
        Self::with_config(seed, GenConfig::default())
    }

    pub fn with_config(seed: u64, config: GenConfig) -> Self {
        TermGenerator {
            rng: StdRng::seed_from_u64(seed),
            config,
            checker: Checker::new(),
            counter: 0,
        }
    }

    /// A random term, not necessarily accepted by the checker.
    pub fn raw_term(&mut self) -> Term {
        self.counter = 0;
        let shape = self.shape(2);
        let depth = self.config.max_depth;
        self.term(&shape, &mut Vec::new(), depth)
    }

    /// Draws terms until one checks without errors.
    pub fn checked_term(&mut self) -> (Term, CheckReport) {
        loop {
            let t = self.raw_term();
            if let Ok(report) = self.checker.infer(&Context::new(), &t) {
                if !report.is_invalid() {
                    return (t, report);
                }
            }
        }
    }

    fn shape(&mut self, depth: u32) -> Shape {
        if depth == 0 {
            return Shape::Unit;
        }
        match self.rng.gen_range(0..10) {
            0..=2 => Shape::Unit,
            3..=5 => Shape::sum(self.shape(depth - 1), self.shape(depth - 1)),
            6..=7 => Shape::prod(self.shape(depth - 1), self.shape(depth - 1)),
            _ => {
                let dom = if self.config.higher_order {
                    self.shape(depth - 1)
                } else {
                    self.first_order_shape(depth - 1)
                };
                Shape::fun(dom, self.shape(depth - 1))
            }
        }
    }

    fn first_order_shape(&mut self, depth: u32) -> Shape {
        if depth == 0 {
            return Shape::Unit;
        }
        match self.rng.gen_range(0..3) {
            0 => Shape::Unit,
            1 => Shape::sum(
                self.first_order_shape(depth - 1),
                self.first_order_shape(depth - 1),
            ),
            _ => Shape::prod(
                self.first_order_shape(depth - 1),
                self.first_order_shape(depth - 1),
            ),
        }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base}{}", self.counter)
    }

    fn term(&mut self, shape: &Shape, scope: &mut Vec<(String, Shape)>, depth: u32) -> Term {
        let vars: Vec<String> = scope
            .iter()
            .filter(|(_, s)| s == shape)
            .map(|(x, _)| x.clone())
            .collect();
        if !vars.is_empty() && (depth == 0 || self.rng.gen_bool(0.3)) {
            return Term::var(vars[self.rng.gen_range(0..vars.len())].clone());
        }
        let eliminate = if *shape == Shape::Unit { 0.6 } else { 0.3 };
        if depth > 1 && self.rng.gen_bool(eliminate) {
            return self.elimination(shape, scope, depth);
        }
        self.introduction(shape, scope, depth)
    }

    fn introduction(
        &mut self,
        shape: &Shape,
        scope: &mut Vec<(String, Shape)>,
        depth: u32,
    ) -> Term {
        let d = depth.saturating_sub(1);
        match shape {
            Shape::Unit => Term::Unit,
            Shape::Sum(a, b) => {
                if self.rng.gen_bool(0.5) {
                    Term::inl(self.term(a, scope, d))
                } else {
                    Term::inr(self.term(b, scope, d))
                }
            }
            Shape::Prod(a, b) => {
                let l = self.term(a, scope, d);
                Term::pair(l, self.term(b, scope, d))
            }
            Shape::Fun(a, b) => {
                let x = self.fresh("x");
                let v = self.fresh("v");
                scope.push((x.clone(), (**a).clone()));
                let body = self.term(b, scope, d);
                scope.pop();
                Term::lam(x, v, body)
            }
        }
    }

    fn elimination(&mut self, shape: &Shape, scope: &mut Vec<(String, Shape)>, depth: u32) -> Term {
        let d = depth - 1;
        match self.rng.gen_range(0..5) {
            0 => {
                let other = self.first_order_shape(1);
                Term::prl(self.term(&Shape::prod(shape.clone(), other), scope, d))
            }
            1 => {
                let other = self.first_order_shape(1);
                Term::prr(self.term(&Shape::prod(other, shape.clone()), scope, d))
            }
            2 => {
                let (a, b) = (self.first_order_shape(1), self.first_order_shape(1));
                let scrut = self.term(&Shape::sum(a.clone(), b.clone()), scope, d);
                let (xl, xr) = (self.fresh("l"), self.fresh("r"));
                scope.push((xl.clone(), a));
                let left = self.term(shape, scope, d);
                scope.pop();
                scope.push((xr.clone(), b));
                let right = self.term(shape, scope, d);
                scope.pop();
                Term::case(scrut, xl, left, xr, right)
            }
            3 => {
                let a = self.first_order_shape(1);
                let f = self.term(&Shape::fun(a.clone(), shape.clone()), scope, d);
                Term::app(f, self.term(&a, scope, d))
            }
            _ if shape.first_order() => {
                let f = self.term(&Shape::fun(shape.clone(), shape.clone()), scope, d.min(3));
                let k = encode_nat(self.rng.gen_range(0..=self.config.max_rec_count));
                Term::rec(f, k, self.term(shape, scope, d))
            }
            _ => self.introduction(shape, scope, depth),
        }
    }
}

/// `count` checked terms from consecutive seeds starting at `seed`.
pub fn checked_corpus(seed: u64, count: usize) -> Vec<(Term, CheckReport)> {
    let mut g = TermGenerator::new(seed);
    (0..count).map(|_| g.checked_term()).collect()
}

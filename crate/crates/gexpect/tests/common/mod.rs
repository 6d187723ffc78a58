//! Shared generators for the property and acceptance suites.
#![allow(dead_code)] // each test target uses a different subset

use gexpect::payoff::{Expr, PayoffExpr};
use proptest::prelude::*;

/// Clamp an expression tree to `[-k, k]` as an AST, keeping evaluation
/// finite regardless of what the inner tree does.
pub fn clamp(e: Expr, k: f64) -> Expr {
    Expr::Max(vec![Expr::Const(-k), Expr::Min(vec![Expr::Const(k), e])])
}

/// Arbitrary expression trees over variables `x1..x{max_arity}`.
///
/// `exp` arguments are clamped to `[-20, 20]` at generation time so
/// generated payoffs never overflow, and negated literals are folded the
/// way the parser folds them, keeping print/parse round trips structural.
pub fn arb_expr(max_arity: usize) -> BoxedStrategy<Expr> {
    let leaf = if max_arity == 0 {
        (-2.0..2.0f64).prop_map(Expr::Const).boxed()
    } else {
        prop_oneof![
            (-2.0..2.0f64).prop_map(Expr::Const),
            (0..max_arity).prop_map(Expr::Var),
        ]
        .boxed()
    };
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| match e {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            }),
            inner.clone().prop_map(|e| Expr::Abs(Box::new(e))),
            inner
                .clone()
                .prop_map(|e| Expr::Exp(Box::new(clamp(e, 20.0)))),
            (inner.clone(), 0u32..4u32).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Expr::Min),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Expr::Max),
        ]
    })
    .boxed()
}

/// Payoffs of bounded magnitude (clamped to `[-1e6, 1e6]`).
pub fn arb_payoff(max_arity: usize) -> BoxedStrategy<PayoffExpr> {
    arb_expr(max_arity)
        .prop_map(|e| PayoffExpr::new(clamp(e, 1e6)).expect("clamped tree is valid"))
        .boxed()
}

/// Nonnegative payoffs of bounded magnitude (`min(1e6, abs(e))`).
pub fn arb_nonneg_payoff(max_arity: usize) -> BoxedStrategy<PayoffExpr> {
    arb_expr(max_arity)
        .prop_map(|e| {
            let abs = Expr::Abs(Box::new(e));
            let bounded = Expr::Min(vec![Expr::Const(1e6), abs]);
            PayoffExpr::new(bounded).expect("bounded tree is valid")
        })
        .boxed()
}

/// Add two payoffs as ASTs.
pub fn add_payoffs(a: &PayoffExpr, b: &PayoffExpr) -> PayoffExpr {
    PayoffExpr::new(Expr::Add(
        Box::new(a.root().clone()),
        Box::new(b.root().clone()),
    ))
    .expect("sum of valid trees is valid")
}

/// Scale a payoff by a constant as an AST.
pub fn scale_payoff(p: &PayoffExpr, lambda: f64) -> PayoffExpr {
    PayoffExpr::new(Expr::Mul(
        Box::new(Expr::Const(lambda)),
        Box::new(p.root().clone()),
    ))
    .expect("scaled tree is valid")
}

//! Fixtures shared by the benchmarks.

use regreal::dfa::Dfa;
use regreal::fwd::ChpInstance;
use regreal::fwd::{Constraint, Relation};
use regreal::linalg::{rat, rats};
use regreal::lrs::AffineFunction;
use regreal::{Lrs, QMatrix, ZMatrix};

/// `x_{n+3} = x_{n+2} + x_{n+1} - x_n` style recurrence of degree `d`.
pub fn alternating_lrs(d: usize) -> Lrs {
    let a: Vec<i64> = (0..d).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    let b: Vec<i64> = (1..=d as i64).collect();
    Lrs::from_i64(&a, &b).expect("positive degree")
}

/// Counts `#`s modulo `k` and accepts multiples of `k` after at least one.
pub fn hash_counter(k: usize) -> Dfa {
    Dfa::explore(
        vec!["0".into(), "1".into(), "#".into()],
        (0usize, false),
        move |&(c, seen), a| {
            if a == 2 {
                ((c + 1) % k, true)
            } else {
                (c, seen)
            }
        },
        |&(c, seen)| seen && c == 1 % k,
    )
    .expect("small automaton")
}

/// Fibonacci orbit against the chamber `{x_1 = target}`.
pub fn fibonacci_chamber(target: i64) -> ChpInstance {
    let phi = QMatrix::from_rows(vec![rats(&[1, 1]), rats(&[1, 0])]);
    let h = AffineFunction::new(rats(&[1, 0]), rat(-target));
    ChpInstance::new(
        phi,
        rats(&[1, 1]),
        vec![Constraint {
            h,
            rel: Relation::Eq,
        }],
    )
    .expect("consistent dimensions")
}

pub fn dense_matrix(n: usize) -> ZMatrix {
    let v: Vec<i64> = (0..n * n).map(|i| ((i * 7 + 3) % 19) as i64 - 9).collect();
    ZMatrix::from_i64(n, n, &v)
}

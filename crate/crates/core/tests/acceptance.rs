//! Runs every acceptance suite and prints one PASS/FAIL line per criterion.
//! Exits nonzero when any criterion fails.

use std::thread;

use regreal::verify::{run_suite, DEFAULT_SEED, SUITES};

fn main() {
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let ids: Vec<u8> = SUITES
        .iter()
        .filter(|(id, name)| {
            filter.is_empty() || filter.iter().any(|f| f == name || *f == id.to_string())
        })
        .map(|(id, _)| *id)
        .collect();
    let reports: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = ids
            .iter()
            .map(|&id| s.spawn(move || (id, run_suite(id, DEFAULT_SEED))))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite panicked"))
            .collect()
    });
    let mut failed = 0;
    for (id, r) in reports {
        match r {
            Ok(r) => {
                println!("{r}");
                failed += usize::from(!r.passed());
            }
            Err(e) => {
                println!("criterion {id} FAIL: {e}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

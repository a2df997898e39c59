//! Acceptance criteria 1 to 12 at full scale. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any fails.
//!
//! `cargo test --test acceptance -- 1 7 10` runs a subset.

use std::process::ExitCode;

use reduced_measure::experiment::criteria::*;
use reduced_measure::Result;

const SEED: u64 = 20240611;

fn run(id: u32) -> Result<CriterionReport> {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(SEED),
        4 => criterion_4(SEED),
        5 => criterion_5(),
        6 => criterion_6(SEED),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(SEED),
        _ => unreachable!(),
    }
}

fn main() -> ExitCode {
    let picked: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).filter(|i| (1..=12).contains(i)).collect();
    let ids: Vec<u32> = if picked.is_empty() { (1..=12).collect() } else { picked };
    let mut failed = Vec::new();
    for id in ids {
        match run(id) {
            Ok(r) => {
                println!("{}", r.summary_line());
                if !r.passed() {
                    print!("{}", r.detail());
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("criterion {id:>2}: FAIL error: {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} failing: {failed:?}", failed.len());
        ExitCode::FAILURE
    }
}

//! Long-running reproductions. Run with
//! `cargo test --release -p dukego --test extended -- --ignored`.

use dukego::solver::{fairness_of, solve_bounded, Fairness, SolveOptions};
use dukego::Dims;

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn two_white_two_black(d: &str) -> Fairness {
    let dims: Dims = d.parse().unwrap();
    let res = solve_bounded(dims, 2, 2, &SolveOptions { threads: threads(), ..Default::default() }).unwrap();
    fairness_of(&res).unwrap()
}

#[test]
#[ignore = "solves about 286 million states"]
fn two_whites_two_blacks_seven_by_eight_is_fair() {
    assert_eq!(two_white_two_black("7x8"), Fairness::Fair);
}

#[test]
#[ignore = "solves about 238 million states"]
fn two_whites_two_blacks_six_by_nine_is_fair() {
    assert_eq!(two_white_two_black("6x9"), Fairness::Fair);
}

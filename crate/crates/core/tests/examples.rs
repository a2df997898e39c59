//! Every example under `examples/` must keep running.

#[path = "../examples/green_function.rs"]
mod green_function;

#[path = "../examples/measure_algebra.rs"]
mod measure_algebra;

#[path = "../examples/nonlinearities.rs"]
mod nonlinearities;

#[path = "../examples/semilinear_solve.rs"]
mod semilinear_solve;

#[path = "../examples/vazquez_threshold.rs"]
mod vazquez_threshold;

#[path = "../examples/critical_exponent.rs"]
mod critical_exponent;

#[path = "../examples/mollification_path.rs"]
mod mollification_path;

#[path = "../examples/signed_split.rs"]
mod signed_split;

#[path = "../examples/reduced_calculus.rs"]
mod reduced_calculus;

#[path = "../examples/capacity_lab.rs"]
mod capacity_lab;

#[path = "../examples/weak_stability.rs"]
mod weak_stability;

#[path = "../examples/config_runner.rs"]
mod config_runner;

#[test]
fn green_function_runs() {
    green_function::run_example().unwrap();
}

#[test]
fn measure_algebra_runs() {
    measure_algebra::run_example().unwrap();
}

#[test]
fn nonlinearities_runs() {
    nonlinearities::run_example().unwrap();
}

#[test]
fn semilinear_solve_runs() {
    semilinear_solve::run_example().unwrap();
}

#[test]
fn vazquez_threshold_runs() {
    vazquez_threshold::run_example().unwrap();
}

#[test]
fn critical_exponent_runs() {
    critical_exponent::run_example().unwrap();
}

#[test]
fn mollification_path_runs() {
    mollification_path::run_example().unwrap();
}

#[test]
fn signed_split_runs() {
    signed_split::run_example().unwrap();
}

#[test]
fn reduced_calculus_runs() {
    reduced_calculus::run_example().unwrap();
}

#[test]
fn capacity_lab_runs() {
    capacity_lab::run_example().unwrap();
}

#[test]
fn weak_stability_runs() {
    weak_stability::run_example().unwrap();
}

#[test]
fn config_runner_runs() {
    config_runner::run_example().unwrap();
}

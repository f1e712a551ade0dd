//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Criteria carry wall-clock limits, so the tests take a shared lock and run
//! one at a time even when the harness uses several threads.

use std::io::Write;
use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

use schneider_core::verify::{run_criterion, VerifyOptions};

static SERIAL: Mutex<()> = Mutex::new(());

fn report(line: &str) {
    // bypasses the harness's output capture so the line always shows
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn criterion(id: u8) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome = run_criterion(id, &VerifyOptions::default());
    report(&outcome.to_string());
    assert!(outcome.passed, "criterion {id} failed: {}", outcome.detail);
}

#[test]
fn criterion_01_spectrum_identity_grid() {
    criterion(1);
}

#[test]
fn criterion_02_spectrum_maximum() {
    criterion(2);
}

#[test]
fn criterion_03_legendre_duality() {
    criterion(3);
}

#[test]
fn criterion_04_truncated_two_digit_spectrum() {
    criterion(4);
}

#[test]
fn criterion_05_midpoint_law() {
    criterion(5);
}

#[test]
fn criterion_06_bowen_roots() {
    criterion(6);
}

#[test]
fn criterion_07_periodic_point_pressure() {
    criterion(7);
}

#[test]
fn criterion_08_pressure_convergence() {
    criterion(8);
}

#[test]
fn criterion_09_expansion_exactness() {
    criterion(9);
}

#[test]
fn criterion_10_approximation_identity() {
    criterion(10);
}

#[test]
fn criterion_11_phi_equals_p_to_third_digit() {
    criterion(11);
}

#[test]
fn criterion_12_rational_tail() {
    criterion(12);
}

#[test]
fn criterion_13_hensel_fixed_points() {
    criterion(13);
}

#[test]
fn criterion_14_monte_carlo_haar() {
    criterion(14);
}

#[test]
fn criterion_15_monte_carlo_gibbs() {
    criterion(15);
}

#[test]
fn criterion_16_verify_command() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_schneider")).arg("verify").output().expect("run schneider verify");
    let seconds = start.elapsed().as_secs_f64();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let passes = stdout.lines().filter(|l| l.starts_with("[PASS]")).count();
    let ok = out.status.code() == Some(0) && passes == 15 && seconds < 300.0;
    report(&format!(
        "[{}] 16 cli        verify command                     {seconds:>8.2}s  exit {:?}, {passes}/15 criteria passed",
        if ok { "PASS" } else { "FAIL" },
        out.status.code()
    ));
    assert!(ok, "verify exited with {:?} after {seconds:.1}s:\n{stdout}", out.status.code());
}

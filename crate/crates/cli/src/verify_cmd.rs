//! `verify`: run the full verification battery for the selected models —
//! residue identities, quartic residuals, three-way amplitude agreement
//! (closed form, time march, contour inversion), Lorentzian closed form
//! vs march with zero-crossing spot checks, and trajectory physicality —
//! then print one report row per check. Exit code is 0 only when every
//! check passes; any failure exits 1 with the failing checks named on
//! stderr.

use serde::Serialize;

use decoherence_core::checks::{
    verify_lorentzian, verify_special, VerificationOptions, VerificationReport,
};

use crate::config::Job;
use crate::error::CliError;
use crate::render;

#[derive(Serialize)]
struct CheckRow {
    name: String,
    measured: f64,
    allowed: f64,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    library_version: &'a str,
    quick: bool,
    all_passed: bool,
    checks: Vec<CheckRow>,
}

pub fn run(job: &Job, json: bool, quick: bool, corrupt_residue: bool) -> Result<(), CliError> {
    let options = VerificationOptions {
        quick,
        corrupt_residue,
    };
    let mut report = VerificationReport { checks: Vec::new() };
    if job.include_special {
        let mut sub = verify_special(&job.special, &job.initial, &options)?;
        for check in &mut sub.checks {
            check.name = format!("special: {}", check.name);
        }
        report.extend(sub);
    }
    for (label, reservoir) in &job.lorentzians {
        let mut sub = verify_lorentzian(reservoir, &job.initial, &options)?;
        for check in &mut sub.checks {
            check.name = format!("{label}: {}", check.name);
        }
        report.extend(sub);
    }

    if json {
        let document = VerifyDocument {
            library_version: render::VERSION,
            quick,
            all_passed: report.all_passed(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckRow {
                    name: c.name.clone(),
                    measured: c.measured,
                    allowed: c.allowed,
                    passed: c.passed(),
                })
                .collect(),
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&document)
                .map_err(|e| CliError::Io(format!("cannot serialize report: {e}")))?
        );
    } else {
        let width = report
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0);
        println!(
            "verification report ({} mode):",
            if quick { "quick" } else { "full" }
        );
        for check in &report.checks {
            println!(
                "  {:<width$}  measured {:>9.3e}  allowed {:>9.3e}  [{}]",
                check.name,
                check.measured,
                check.allowed,
                if check.passed() { "ok" } else { "FAIL" },
            );
        }
    }

    if report.all_passed() {
        if !json {
            println!("all {} checks passed", report.checks.len());
        }
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Check(format!(
            "verification failed: {}",
            failed.join("; ")
        )))
    }
}

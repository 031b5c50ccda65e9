//! `roots`: solve the characteristic quartic for the configured
//! band-edge reservoir and print the root/residue table, the crossover
//! time, and the tail-coefficient magnitude, together with the residue
//! identity residuals. `--json` prints the same quantities as JSON;
//! `--out` also writes them as `roots.csv` (columns `quantity,re,im`),
//! carrying numbers at full precision so the two forms agree bit for
//! bit.

use serde::Serialize;

use decoherence_core::exact::{asymptotics, solve_quartic};
use decoherence_core::ComplexValue;

use crate::config::{Job, RunConfig};
use crate::error::CliError;
use crate::render;

#[derive(Serialize)]
struct Quantity {
    name: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct RootsDocument<'a> {
    library_version: &'a str,
    config: &'a RunConfig,
    quantities: &'a [Quantity],
}

pub fn run(job: &Job, json: bool) -> Result<(), CliError> {
    let solution = solve_quartic(&job.special)?;
    let summary = asymptotics(&solution);

    let residue_sum: ComplexValue = solution.residues().iter().sum();
    let weighted_deviation: ComplexValue = solution
        .residues()
        .iter()
        .zip(solution.roots())
        .map(|(r, z)| r * z)
        .sum::<ComplexValue>()
        - 1.0;
    let tail = summary.tail_coefficient();

    let mut quantities = Vec::new();
    for (k, z) in solution.roots().iter().enumerate() {
        quantities.push(Quantity {
            name: format!("z_{}", k + 1),
            re: z.re,
            im: z.im,
        });
    }
    for (k, r) in solution.residues().iter().enumerate() {
        quantities.push(Quantity {
            name: format!("R_{}", k + 1),
            re: r.re,
            im: r.im,
        });
    }
    quantities.push(Quantity {
        name: "tau".to_string(),
        re: summary.tau(),
        im: 0.0,
    });
    quantities.push(Quantity {
        name: "tail_coefficient".to_string(),
        re: tail.re,
        im: tail.im,
    });
    quantities.push(Quantity {
        name: "tail_coefficient_abs".to_string(),
        re: tail.norm(),
        im: 0.0,
    });
    quantities.push(Quantity {
        name: "residue_sum".to_string(),
        re: residue_sum.re,
        im: residue_sum.im,
    });
    quantities.push(Quantity {
        name: "weighted_residue_sum_minus_one".to_string(),
        re: weighted_deviation.re,
        im: weighted_deviation.im,
    });
    quantities.push(Quantity {
        name: "max_scaled_quartic_residual".to_string(),
        re: solution.max_scaled_residual(),
        im: 0.0,
    });

    // Files first: a closed stdout pipe must not cost the CSV.
    let mut written = None;
    if let Some(dir) = &job.out_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        let rows: Vec<Vec<String>> = quantities
            .iter()
            .map(|q| vec![q.name.clone(), render::full(q.re), render::full(q.im)])
            .collect();
        let path = dir.join("roots.csv");
        render::write_csv(&path, &render::header_lines(job, "roots"), &["quantity", "re", "im"], &rows)?;
        written = Some(path);
    }

    if json {
        let document = RootsDocument {
            library_version: render::VERSION,
            config: &job.config,
            quantities: &quantities,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&document)
                .map_err(|e| CliError::Io(format!("cannot serialize roots document: {e}")))?
        );
    } else {
        print_table(job, &quantities, residue_sum, weighted_deviation, &solution);
    }
    if let Some(path) = written {
        if !json {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn print_table(
    job: &Job,
    quantities: &[Quantity],
    residue_sum: ComplexValue,
    weighted_deviation: ComplexValue,
    solution: &decoherence_core::exact::QuarticSolution,
) {
    println!(
        "characteristic roots (coupling {}, width {}, omega0 {}):",
        job.config.coupling, job.config.width, job.config.omega0
    );
    for k in 0..4 {
        let z = &quantities[k];
        let r = &quantities[4 + k];
        println!(
            "  z_{} = {:+.12e} {:+.12e}i    R(z_{}) = {:+.12e} {:+.12e}i",
            k + 1,
            z.re,
            z.im,
            k + 1,
            r.re,
            r.im
        );
    }
    println!("  crossover time tau          = {:.12e}", job.tau);
    let tail = quantities.iter().find(|q| q.name == "tail_coefficient").unwrap();
    println!(
        "  tail coefficient D          = {:+.12e} {:+.12e}i  (|D| = {:.12e})",
        tail.re,
        tail.im,
        ComplexValue::new(tail.re, tail.im).norm()
    );
    println!("  |sum_l R_l|                 = {:.3e}", residue_sum.norm());
    println!(
        "  |sum_l R_l z_l - 1|         = {:.3e}",
        weighted_deviation.norm()
    );
    println!(
        "  max scaled quartic residual = {:.3e}",
        solution.max_scaled_residual()
    );
}

use std::fs::File;
use std::io::BufReader;

use covtime_core::dilation::dilation_report;
use covtime_core::model::{read_povm, validate_povm};
use covtime_core::report::Record;

use crate::config::{Common, DilateArgs};
use crate::output::{CliError, Outcome};

pub fn run(common: &Common, args: &DilateArgs) -> Result<Outcome, CliError> {
    let path = &args.path;
    let file = File::open(path).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
    let f = read_povm(BufReader::new(file)).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;

    let mut out = Outcome::new();
    out.push(
        Record::new("config")
            .text("command", "dilate")
            .text("path", path.display())
            .int("n_bins", f.n_bins())
            .int("dim", f.dim())
            .real("tau", f.lattice().tau())
            .int("bin_sets", args.bin_sets)
            .text("seed", common.seed),
    );
    let validation = validate_povm(&f);
    out.push(validation.record());
    if !validation.passed() {
        let axioms: Vec<String> = validation.violations().iter().map(|a| a.to_string()).collect();
        out.notes
            .push(format!("not a covariant POVM: violates {}", axioms.join(", ")));
        return Ok(out);
    }
    let mut report = dilation_report(&f, &f.unitary_group(), args.bin_sets, common.seed)?;
    report.tolerance *= common.tolerance_scale;
    out.push(report.record());
    Ok(out)
}

use covtime_core::airy::{transported_combined_minimizer, transported_minimal_state};
use covtime_core::model::{
    balanced_width, build_halfline_povm, build_sharp_time_povm, gaussian_state, random_smooth_state, CovariantPOVM,
    EnergyGrid, StateVector,
};
use covtime_core::par;
use covtime_core::report::Record;
use covtime_core::uncertainty::{check_bound, Bound, BoundReport};

use crate::certify::{DEFAULT_H, DEFAULT_LENGTH};
use crate::config::{BoundChoice, BoundsArgs, Common, Model, StateSpec};
use crate::output::{CliError, Outcome};

pub const DEFAULT_N: usize = 512;
/// The transported minimizers need a finer lattice to resolve `Δ(T)`.
pub const MINIMIZER_N: usize = 4096;

pub fn run(common: &Common, args: &BoundsArgs) -> Result<Outcome, CliError> {
    let minimizer = matches!(args.states, StateSpec::Minimal | StateSpec::Combined);
    if minimizer && args.model == Model::Fullline {
        return Err(CliError::Usage(
            "minimal and combined states live on the half-line model; use --model halfline".into(),
        ));
    }
    let n = common.n.unwrap_or(if minimizer { MINIMIZER_N } else { DEFAULT_N });
    let de = common.de.unwrap_or_else(|| EnergyGrid::balanced_spacing(n));
    let full = EnergyGrid::full_line(n, de)?;
    let f = match args.model {
        Model::Fullline => build_sharp_time_povm(&full)?,
        Model::Halfline => build_halfline_povm(&full, n / 2)?,
    };
    let bounds: Vec<Bound> = match (args.bound, args.model) {
        (BoundChoice::All, Model::Fullline) => vec![Bound::TimeEnergy],
        (BoundChoice::All, Model::Halfline) => vec![Bound::TimeEnergy, Bound::PositiveEnergy, Bound::Combined],
        (BoundChoice::TimeEnergy, _) => vec![Bound::TimeEnergy],
        (BoundChoice::PositiveEnergy, _) => vec![Bound::PositiveEnergy],
        (BoundChoice::Combined, _) => vec![Bound::Combined],
    };

    let h = common.h.unwrap_or(DEFAULT_H);
    let length = common.domain_l.unwrap_or(DEFAULT_LENGTH);
    let states: Vec<(String, StateVector)> = match args.states {
        StateSpec::Gaussian => {
            let center = if f.grid().is_halfline() {
                f.grid().offset() + f.grid().extent() / 2.0
            } else {
                0.0
            };
            vec![(
                "gaussian".into(),
                gaussian_state(f.grid(), center, balanced_width(&full))?.state,
            )]
        }
        StateSpec::Minimal => vec![("minimal".into(), transported_minimal_state(f.grid(), h, length)?)],
        StateSpec::Combined => vec![("combined".into(), transported_combined_minimizer(f.grid(), h, length)?)],
        StateSpec::Random { first, last } => {
            let count = (last - first + 1) as usize;
            par::map_range(count, |i| {
                let seed = first + i as u64;
                (format!("random:{seed}"), random_smooth_state(f.grid(), seed))
            })
        }
    };

    let reports = par::map_slice(&states, |(label, psi)| {
        check_state(&f, &bounds, label, psi, common.tolerance_scale)
    });
    let mut out = Outcome::new();
    out.push(
        Record::new("config")
            .text("command", "bounds")
            .text(
                "model",
                if args.model == Model::Halfline {
                    "halfline"
                } else {
                    "fullline"
                },
            )
            .int("n", n)
            .real("de", de)
            .int("states", states.len())
            .text("seed", common.seed)
            .real("tolerance_scale", common.tolerance_scale),
    );
    let mut worst = f64::INFINITY;
    let mut unreliable = 0;
    let mut total = 0;
    for batch in reports {
        for r in batch? {
            worst = worst.min(r.margin);
            unreliable += usize::from(!r.reliable);
            total += 1;
            out.push(r.record());
        }
    }
    let failed = out.records.iter().filter(|r| r.get("pass") == Some("false")).count();
    if unreliable > 0 {
        out.notes.push(format!(
            "{unreliable} of {total} checks reach the wrap region of the lattice; their values are indicative only"
        ));
    }
    out.push(
        Record::new("summary")
            .text("command", "bounds")
            .int("checks", total)
            .int("failed", failed)
            .int("unreliable", unreliable)
            .real("worst_margin", worst)
            .flag("pass", failed == 0),
    );
    Ok(out)
}

fn check_state(
    f: &CovariantPOVM,
    bounds: &[Bound],
    label: &str,
    psi: &StateVector,
    scale: f64,
) -> Result<Vec<BoundReport>, CliError> {
    let u = f.unitary_group();
    bounds
        .iter()
        .map(|&b| Ok(check_bound(b, f, &u, psi, b.default_tolerance() * scale)?.labelled(label)))
        .collect()
}

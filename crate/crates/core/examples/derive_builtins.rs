//! Runs the default elimination of every raw builtin system and prints the
//! per-step counts and the result.

use secrecy_regions::dsl::format_system;
use secrecy_regions::poly::Mode;
use secrecy_regions::regions::{derive_from_raw, RegionId};

fn main() {
    for id in [
        RegionId::AppbRaw,
        RegionId::AppcRaw,
        RegionId::Thm7StrongReduced,
        RegionId::Thm7StrongRaw,
    ] {
        let d = derive_from_raw(id, None, Mode::FarkasShannon).expect("builtin elimination");
        println!(
            "# {id}: {} inequalities, {} assumptions, {} ms",
            d.system.ineqs.len(),
            d.system.assumptions.len(),
            d.elapsed_ms
        );
        for s in &d.steps {
            println!(
                "#   {}: {} upper x {} lower, {} generated, {} kept",
                s.var, s.positive, s.negative, s.generated, s.kept
            );
        }
        if let Some(v) = &d.verdict {
            println!("# equal to {}: {}", v.target, v.equal);
        }
        println!("{}", format_system(&d.system));
    }
}

//! Turn a Choose strategy for a disjoint-cut game into one for the
//! ideal-cut game and certify every adversary playout.

use std::sync::Arc;

use cutchoose::engine::{Flags, GameFamily, GameInstance, GameParams, Role, Start, Structure, Variant, Width};
use cutchoose::solver::OnDemand;
use cutchoose::structures::{GroundSet, MonotoneFamily};
use cutchoose::transforms::{certify_playouts, disjointify_choose, Simulation};

fn main() -> cutchoose::error::Result<()> {
    let ground = GroundSet::new(5)?;
    let u = GameInstance::new(
        Structure::Sets(MonotoneFamily::size_at_most(ground, 0)),
        GameParams {
            family: GameFamily::U,
            start: Start::Set(ground.full()),
            rounds: 2,
            width: Width::Bounded(2),
            variant: Variant::Exact,
            flags: Flags { maximal: true, cut_current: false },
        },
    )?;
    let sigma = Arc::new(OnDemand::new(Role::Choose, Default::default()));
    let sim = disjointify_choose(&u, sigma, Width::Bounded(2), true)?;
    println!("input:  {}\noutput: {}", u.summary(), sim.output_game().summary());

    let report = certify_playouts(&sim, 100_000)?;
    println!("{} playouts, {} sound, Choose won all: {}", report.plays, report.valid, report.owner_always_won);
    if let Some(cert) = report.sample {
        println!("sample certificate: {}", cert.relation.statement);
    }
    Ok(())
}

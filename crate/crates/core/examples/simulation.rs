//! A small replicated simulation with RAND-maximizing grid scoring.

use bayes_cvxclust::experiment::{
    run_simulation, summary_csv, ModelSetup, SimulationConfig, SimulationSetting,
};
use bayes_cvxclust::model::ModelKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = SimulationConfig::desk_scale(SimulationSetting::new(12, 6)?, 42);
    config.reps = 3;
    config.iterations = 1000;
    config.burn_in = 200;
    let setups: Vec<ModelSetup> = [ModelKind::Bscvc, ModelKind::Bnegscvc]
        .into_iter()
        .map(|k| {
            let mut s = ModelSetup::default_for(k);
            s.grid.axes[0].m = 8;
            s
        })
        .collect();
    let report = run_simulation(&config, &setups)?;
    print!("{}", summary_csv(&report)?);
    for m in &report.models {
        let best: Vec<usize> = m.chosen.iter().map(|c| c.grid_index).collect();
        println!("{} best grid indices per rep: {best:?}", m.model);
    }
    Ok(())
}

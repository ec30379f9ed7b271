use super::config::EaConfig;
use super::state::EaState;
use crate::analysis::{self, DegreeSnapshot, RunRecord};
use crate::error::Result;
use crate::nk::NkLandscape;

/// Generate the landscape for `config.seed` and run it.
pub fn run(config: &EaConfig) -> Result<RunRecord> {
    config.validate()?;
    let landscape = NkLandscape::generate(config.n, config.k_nk, config.seed)?;
    run_on(config, &landscape).map(|(record, _)| record)
}

/// Run `config` on an existing landscape and return the record together
/// with the final state.
pub fn run_on(config: &EaConfig, landscape: &NkLandscape) -> Result<(RunRecord, EaState)> {
    let mut state = EaState::init(config, landscape)?;
    let mut record = RunRecord::default();
    observe(&state, config, &mut record)?;
    for _ in 0..config.generations {
        state.run_generation(config, landscape)?;
        observe(&state, config, &mut record)?;
    }
    record.isolated_selections = state.isolated_selections();
    Ok((record, state))
}

fn observe(state: &EaState, config: &EaConfig, record: &mut RunRecord) -> Result<()> {
    let g = state.generation();
    if g.is_multiple_of(config.metric_stride) || g == config.generations {
        let with_network = config.network_stride > 0 && g.is_multiple_of(config.network_stride);
        record
            .rows
            .push(analysis::metrics_row(state, config.top_fraction, with_network)?);
    }
    if config.snapshot_generations.contains(&g) {
        if let Some(graph) = state.graph() {
            record.degree_histograms.push(DegreeSnapshot {
                generation: g,
                histogram: graph.degree_histogram(),
            });
        }
    }
    Ok(())
}

//! Selective redundancy: one face while it meets the application's goal
//! within its cost budget, flooding only while no single face does.

use super::{
    AppRequirements, FaceStats, Preference, Rationale, ScheduledSend, StrategyConfig,
    StrategyDecision,
};
use crate::time::{SimDuration, SimTime};

/// Mutable state carried between decisions of one adaptive strategy instance.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdaptiveState {
    pub consecutive_violations: u32,
    pub flooding: bool,
    /// While flooding: since when the constraint has been met again.
    pub met_since: Option<SimTime>,
}

fn flood(faces: &[&FaceStats]) -> StrategyDecision {
    let mut ids: Vec<_> = faces.iter().map(|s| s.face).collect();
    ids.sort();
    StrategyDecision {
        sends: ids.into_iter().map(|face| ScheduledSend { face, delay_ms: 0.0 }).collect(),
        rationale: Rationale::Flood,
    }
}

pub fn adaptive_select(
    stats: &[FaceStats],
    reqs: &AppRequirements,
    cfg: &StrategyConfig,
    state: &mut AdaptiveState,
    now: SimTime,
) -> StrategyDecision {
    assert!(!stats.is_empty(), "adaptive_select needs at least one eligible face");
    let in_budget: Vec<&FaceStats> = match reqs.max_cost {
        Some(max) => stats.iter().filter(|s| s.cost <= max).collect(),
        None => stats.iter().collect(),
    };
    if in_budget.is_empty() {
        let cheapest = stats
            .iter()
            .min_by(|a, b| a.cost.total_cmp(&b.cost).then(a.face.cmp(&b.face)))
            .expect("non-empty");
        return StrategyDecision::single(cheapest.face, Rationale::CostConstrained);
    }

    match reqs.preference {
        Preference::Throughput => {
            let best = in_budget
                .iter()
                .max_by(|a, b| {
                    a.data_returned_window(now, cfg)
                        .cmp(&b.data_returned_window(now, cfg))
                        .then(b.face.cmp(&a.face))
                })
                .expect("non-empty");
            StrategyDecision::single(best.face, Rationale::BestFace)
        }
        Preference::Loss => {
            let mut order = in_budget.clone();
            order.sort_by(|a, b| {
                a.loss_estimate().total_cmp(&b.loss_estimate()).then(a.face.cmp(&b.face))
            });
            order.truncate(2);
            if order.len() == 1 {
                StrategyDecision::single(order[0].face, Rationale::BestFace)
            } else {
                flood(&order)
            }
        }
        Preference::Delay => {
            let target = reqs.delay_target_ms.unwrap_or(f64::INFINITY);
            // Faces without a sample yet are given the benefit of the doubt.
            let meets = |s: &FaceStats| s.delay_ewma_ms.map_or(true, |d| d <= target);
            let cheapest_ok = in_budget
                .iter()
                .filter(|s| meets(s))
                .min_by(|a, b| a.cost.total_cmp(&b.cost).then(a.face.cmp(&b.face)));

            match cheapest_ok {
                Some(face) => {
                    state.consecutive_violations = 0;
                    if state.flooding {
                        let since = *state.met_since.get_or_insert(now);
                        let calm = SimDuration::from_ms(cfg.adaptive.calm_down_ms);
                        if now.saturating_since(since) >= calm {
                            state.flooding = false;
                            state.met_since = None;
                        } else {
                            return flood(&in_budget);
                        }
                    }
                    StrategyDecision::single(face.face, Rationale::BestFace)
                }
                None => {
                    state.met_since = None;
                    state.consecutive_violations = state.consecutive_violations.saturating_add(1);
                    if state.consecutive_violations >= cfg.adaptive.flood_trigger {
                        state.flooding = true;
                    }
                    if state.flooding {
                        return flood(&in_budget);
                    }
                    let fastest = in_budget
                        .iter()
                        .min_by(|a, b| {
                            let da = a.delay_ewma_ms.unwrap_or(f64::INFINITY);
                            let db = b.delay_ewma_ms.unwrap_or(f64::INFINITY);
                            da.total_cmp(&db).then(a.face.cmp(&b.face))
                        })
                        .expect("non-empty");
                    StrategyDecision::single(fastest.face, Rationale::BestFace)
                }
            }
        }
    }
}

use std::cmp::Ordering;

use rand::Rng;

use super::{FaceStats, Rationale, ScheduledSend, StrategyConfig, StrategyDecision};

fn by_key_then_id(a: &FaceStats, b: &FaceStats, key: impl Fn(&FaceStats) -> f64) -> Ordering {
    key(a).total_cmp(&key(b)).then(a.face.cmp(&b.face))
}

/// Fastest-responding face first; after its RTE the other faces are tried
/// one by one, each after an extra uniform random stagger.
pub fn default_select<R: Rng + ?Sized>(
    stats: &[FaceStats],
    cfg: &StrategyConfig,
    rng: &mut R,
) -> StrategyDecision {
    assert!(!stats.is_empty(), "default_select needs at least one eligible face");
    let mut order: Vec<&FaceStats> = stats.iter().collect();
    order.sort_by(|a, b| by_key_then_id(a, b, |s| s.rte_ms));
    let primary = order[0];
    let mut sends = vec![ScheduledSend { face: primary.face, delay_ms: 0.0 }];
    let mut offset = primary.rte_ms;
    for other in &order[1..] {
        offset += if cfg.stagger_jitter_max_ms > 0.0 {
            rng.gen_range(0.0..=cfg.stagger_jitter_max_ms)
        } else {
            0.0
        };
        sends.push(ScheduledSend { face: other.face, delay_ms: offset });
    }
    StrategyDecision { sends, rationale: Rationale::BestFace }
}

/// The face with the fewest unanswered interests.
pub fn loadsharing_select(stats: &[FaceStats]) -> StrategyDecision {
    let best = stats
        .iter()
        .min_by(|a, b| a.pending.cmp(&b.pending).then(a.face.cmp(&b.face)))
        .expect("loadsharing_select needs at least one eligible face");
    StrategyDecision::single(best.face, Rationale::LoadShare)
}

/// Every eligible face, immediately.
pub fn parallel_select(stats: &[FaceStats]) -> StrategyDecision {
    assert!(!stats.is_empty(), "parallel_select needs at least one eligible face");
    let mut faces: Vec<_> = stats.iter().map(|s| s.face).collect();
    faces.sort();
    StrategyDecision {
        sends: faces.into_iter().map(|face| ScheduledSend { face, delay_ms: 0.0 }).collect(),
        rationale: Rationale::Flood,
    }
}

/// Cheapest face first; costlier faces follow, each one local-wait later.
pub fn bif_local_first_select(stats: &[FaceStats], cfg: &StrategyConfig) -> StrategyDecision {
    let mut order: Vec<&FaceStats> = stats.iter().collect();
    order.sort_by(|a, b| by_key_then_id(a, b, |s| s.cost));
    let local = order.first().expect("bif_local_first_select needs at least one eligible face");
    let wait = cfg.local_wait_ms.unwrap_or(2.0 * local.rte_ms);
    let sends = order
        .iter()
        .enumerate()
        .map(|(i, s)| ScheduledSend { face: s.face, delay_ms: wait * i as f64 })
        .collect();
    StrategyDecision { sends, rationale: Rationale::LocalFirst }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccn::FaceId;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn face(id: u16, rte: f64, pending: u32, cost: f64) -> FaceStats {
        let mut s = FaceStats::new(FaceId(id), cost, &StrategyConfig::default());
        s.rte_ms = rte;
        s.pending = pending;
        s
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn default_sends_fastest_then_staggers() {
        let cfg = StrategyConfig::default();
        let d = default_select(&[face(1, 50.0, 0, 1.0), face(2, 80.0, 0, 1.0)], &cfg, &mut rng());
        assert_eq!(d.sends[0], ScheduledSend { face: FaceId(1), delay_ms: 0.0 });
        assert_eq!(d.sends[1].face, FaceId(2));
        assert!((50.0..=70.0).contains(&d.sends[1].delay_ms), "{:?}", d);
        assert!(d.is_well_formed());
    }

    #[test]
    fn default_single_face_has_no_stagger() {
        let d = default_select(&[face(3, 10.0, 0, 1.0)], &StrategyConfig::default(), &mut rng());
        assert_eq!(d, StrategyDecision::single(FaceId(3), Rationale::BestFace));
    }

    #[test]
    fn default_tie_goes_to_lower_id() {
        let d = default_select(
            &[face(4, 20.0, 0, 1.0), face(2, 20.0, 0, 1.0)],
            &StrategyConfig::default(),
            &mut rng(),
        );
        assert_eq!(d.sends[0].face, FaceId(2));
    }

    #[test]
    fn default_stagger_is_cumulative() {
        let cfg = StrategyConfig::default();
        let stats = [face(1, 10.0, 0, 1.0), face(2, 30.0, 0, 1.0), face(3, 40.0, 0, 1.0)];
        let d = default_select(&stats, &cfg, &mut rng());
        assert!(d.sends[1].delay_ms >= 10.0 && d.sends[2].delay_ms >= d.sends[1].delay_ms);
        assert!(d.sends[2].delay_ms <= 10.0 + 2.0 * cfg.stagger_jitter_max_ms);
    }

    #[test]
    fn loadsharing_picks_least_pending() {
        let d = loadsharing_select(&[face(1, 1.0, 3, 1.0), face(2, 1.0, 1, 1.0)]);
        assert_eq!(d.faces(), vec![FaceId(2)]);
        let d = loadsharing_select(&[face(1, 1.0, 0, 1.0), face(2, 1.0, 0, 1.0)]);
        assert_eq!(d.faces(), vec![FaceId(1)]);
    }

    #[test]
    fn parallel_floods_all() {
        let d = parallel_select(&[face(2, 1.0, 0, 1.0), face(1, 5.0, 0, 1.0)]);
        assert_eq!(d.faces(), vec![FaceId(1), FaceId(2)]);
        assert!(d.sends.iter().all(|s| s.delay_ms == 0.0));
        let one = parallel_select(&[face(9, 1.0, 0, 1.0)]);
        let def = default_select(&[face(9, 1.0, 0, 1.0)], &StrategyConfig::default(), &mut rng());
        assert_eq!(one.sends, def.sends);
    }

    #[test]
    fn bif_prefers_cheap_face_and_falls_back() {
        let cfg = StrategyConfig { local_wait_ms: Some(25.0), ..Default::default() };
        let d = bif_local_first_select(&[face(1, 10.0, 0, 3.0), face(2, 4.0, 0, 0.5)], &cfg);
        assert_eq!(d.sends[0], ScheduledSend { face: FaceId(2), delay_ms: 0.0 });
        assert_eq!(d.sends[1], ScheduledSend { face: FaceId(1), delay_ms: 25.0 });
        assert_eq!(d.rationale, Rationale::LocalFirst);
    }

    #[test]
    fn bif_default_wait_is_twice_local_rte() {
        let d = bif_local_first_select(
            &[face(1, 10.0, 0, 3.0), face(2, 4.0, 0, 0.5)],
            &StrategyConfig::default(),
        );
        assert_eq!(d.sends[1].delay_ms, 8.0);
        let only_local = bif_local_first_select(&[face(2, 4.0, 0, 0.5)], &StrategyConfig::default());
        assert_eq!(only_local.sends.len(), 1);
    }

    fn arb_faces() -> impl Strategy<Value = Vec<FaceStats>> {
        prop::collection::vec((1.0f64..5000.0, 0u32..50, 0.0f64..5.0), 1..6).prop_map(|v| {
            v.into_iter().enumerate().map(|(i, (r, p, c))| face(i as u16, r, p, c)).collect()
        })
    }

    proptest! {
        #[test]
        fn parallel_covers_every_face(faces in arb_faces()) {
            let d = parallel_select(&faces);
            prop_assert_eq!(d.sends.len(), faces.len());
            prop_assert!(d.is_well_formed());
        }

        #[test]
        fn loadsharing_never_picks_a_busier_face(faces in arb_faces(), shift in 0u32..1000) {
            let d = loadsharing_select(&faces);
            let chosen = faces.iter().find(|f| f.face == d.sends[0].face).unwrap();
            prop_assert!(faces.iter().all(|f| chosen.pending <= f.pending));
            let shifted: Vec<_> = faces.iter().cloned().map(|mut f| { f.pending += shift; f }).collect();
            prop_assert_eq!(loadsharing_select(&shifted).faces(), d.faces());
        }

        #[test]
        fn default_primary_is_scale_invariant(faces in arb_faces(), scale in 0.01f64..100.0) {
            let cfg = StrategyConfig::default();
            let d = default_select(&faces, &cfg, &mut rng());
            prop_assert!(d.is_well_formed());
            let scaled: Vec<_> = faces.iter().cloned().map(|mut f| { f.rte_ms *= scale; f }).collect();
            let e = default_select(&scaled, &cfg, &mut rng());
            prop_assert_eq!(d.sends[0].face, e.sends[0].face);
        }
    }
}

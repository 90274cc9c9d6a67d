use proptest::prelude::*;
use subsurf::moves::{apply, successors};
use subsurf::{MarkedDisk, Quarters, Subsurface};

/// A state reached by a short random walk from the empty or full disk.
fn walked() -> impl Strategy<Value = Subsurface> {
    (prop::sample::select(vec![4u32, 6, 8]), any::<bool>(), prop::collection::vec(any::<prop::sample::Index>(), 0..6))
        .prop_map(|(n, full, picks)| {
            let d = MarkedDisk::new(n).unwrap();
            let mut s = if full { d.full() } else { d.empty() };
            for pick in picks {
                let next = successors(&s, 4).moves;
                if next.is_empty() {
                    break;
                }
                s = next[pick.index(next.len())].1.clone();
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn json_roundtrip_is_identity(s in walked()) {
        let back: Subsurface = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(&back, &s);
    }

    #[test]
    fn reductions_are_idempotent(s in walked()) {
        prop_assert_eq!(s.hat().hat(), s.hat());
        prop_assert_eq!(s.essential_part().essential_part(), s.essential_part());
        prop_assert_eq!(&s.complement().complement(), &s);
    }

    #[test]
    fn chi_laws(s in walked()) {
        let n = i64::from(s.point_count());
        prop_assert!(s.adjusted_chi() <= Quarters::ZERO);
        prop_assert_eq!(s.adjusted_chi() + s.complement().adjusted_chi(), Quarters(4 - n));
        prop_assert_eq!(s.hat().adjusted_chi(), s.adjusted_chi());
        prop_assert!(s.m_set().len() as i64 * 4 >= s.adjusted_chi().abs().0 || n == 6);
    }

    #[test]
    fn rotation_commutes(s in walked(), k in -3i64..=3) {
        let r = s.rotate(2 * k).unwrap();
        prop_assert_eq!(r.adjusted_chi(), s.adjusted_chi());
        prop_assert_eq!(r.complement(), s.complement().rotate(2 * k).unwrap());
        prop_assert_eq!(r.hat(), s.hat().rotate(2 * k).unwrap());
        prop_assert_eq!(&r.rotate(-2 * k).unwrap(), &s);
        prop_assert_eq!(r.m_set().len(), s.m_set().len());
    }

    #[test]
    fn moves_replay_and_stay_local(s in walked()) {
        for (mv, t) in successors(&s, usize::MAX).moves {
            prop_assert_eq!(&apply(&s, &mv).unwrap().result, &t);
            prop_assert!((s.raw_chi() - t.raw_chi()).abs() <= Quarters::from_int(1));
            let (a, b) = (s.m_set(), t.m_set());
            prop_assert!(a.difference(&b).count() <= 6 && b.difference(&a).count() <= 6);
            prop_assert!(s.chord_count().abs_diff(t.chord_count()) <= 2);
        }
    }
}

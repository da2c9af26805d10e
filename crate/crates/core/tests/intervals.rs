use adaptive_oco::intervals::{cover, dgc_starting_at, gc_starting_at, halving_split, top_level, Interval, IntervalSystem};

const N: usize = 128;

/// Tiling exactness, membership and the two-sided halving structure,
/// checked without the library's own `halving_split`.
fn check_cover(r: usize, s: usize, system: IntervalSystem) {
    let tiles = cover(r, s, system).unwrap();
    let mut pos = r;
    for tile in &tiles {
        assert_eq!(tile.start(), pos, "gap or overlap in cover of [{r}, {s}]");
        assert!(system.contains(tile), "{tile} is not in the system");
        pos = tile.end() + 1;
    }
    assert_eq!(pos, s + 1, "cover of [{r}, {s}] stops early");

    let lens: Vec<usize> = tiles.iter().map(Interval::len).collect();
    let peak = lens.iter().enumerate().max_by_key(|(i, l)| (**l, usize::MAX - i)).map(|(i, _)| i).unwrap();
    let ok = (0..lens.len()).any(|j| {
        (1..=j).all(|i| 2 * lens[i - 1] <= lens[i]) && (j + 2..lens.len()).all(|i| 2 * lens[i] <= lens[i - 1])
    });
    assert!(ok, "no halving split for [{r}, {s}]: {lens:?}");
    assert!(halving_split(&tiles).is_some());

    // sum of sqrt lengths on each side of the peak is a geometric series
    let total = (s + 1 - r) as f64;
    let ratio = 1.0 / (1.0 - 0.5f64.sqrt());
    let left: f64 = lens[..=peak].iter().map(|&l| (l as f64).sqrt()).sum();
    let right: f64 = lens[peak + 1..].iter().map(|&l| (l as f64).sqrt()).sum();
    assert!(left <= ratio * total.sqrt() + 1e-12);
    assert!(right <= ratio * total.sqrt() + 1e-12);
}

#[test]
fn dense_covers_are_exact_for_every_subinterval() {
    let system = IntervalSystem::Dense { horizon: N };
    for r in 1..=N {
        for s in r..=N {
            check_cover(r, s, system);
        }
    }
}

#[test]
fn geometric_covers_are_exact_for_every_subinterval() {
    for r in 1..=N {
        for s in r..=N {
            check_cover(r, s, IntervalSystem::Geometric);
        }
    }
}

#[test]
fn awake_set_sizes() {
    for t in 1..=N {
        let dense = IntervalSystem::Dense { horizon: N }.containing(t).unwrap();
        assert_eq!(dense.len(), top_level(N) as usize + 1);
        assert!(dense.iter().all(|i| i.contains(t)));
        let gc = IntervalSystem::Geometric.containing(t).unwrap();
        assert_eq!(gc.len(), top_level(t) as usize + 1);
        assert!(gc.iter().all(|i| i.contains(t)));
    }
}

/// Dense intervals that do not contain round 1 are exactly the geometric
/// intervals shifted one round later, level by level.
#[test]
fn dense_system_is_shifted_geometric_system() {
    for t in 2..=N {
        let dense: Vec<(usize, u32)> =
            dgc_starting_at(t, N).unwrap().iter().map(|i| (i.start(), i.level())).collect();
        let shifted: Vec<(usize, u32)> = gc_starting_at(t - 1)
            .unwrap()
            .iter()
            .filter(|i| i.len() <= N)
            .map(|i| (i.start() + 1, i.level()))
            .collect();
        assert_eq!(dense, shifted, "round {t}");
    }
    // round 1 is special: every dense level starts there, no geometric one ends before it
    assert_eq!(dgc_starting_at(1, N).unwrap().len(), top_level(N) as usize + 1);
}

#[test]
fn dense_levels_respect_horizon() {
    for horizon in 1..=64 {
        for t in 1..=horizon {
            for i in dgc_starting_at(t, horizon).unwrap() {
                assert!(i.len() <= horizon);
            }
        }
    }
}

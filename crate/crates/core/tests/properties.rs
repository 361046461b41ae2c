//! Randomized invariants across modules, checked against direct oracles.

use proptest::prelude::*;
use regreal::dfa::Dfa;
use regreal::filters::{brute_at_rank, Filter};
use regreal::formats::{
    parse_dfa, parse_lrs, parse_qmatrix, parse_zmatrix, write_dfa, write_qmatrix, write_zmatrix,
};
use regreal::hitting::{
    all_patterns, chp_to_odp, odp_to_chp, orbit_points, orbit_scan, plp_to_nonneg, shp_to_skolem,
    sign_pattern, skolem_to_chp, Chamber, ChpInstance, OrbitProblem, PlpInstance, ScanOutcome,
    ShpInstance,
};
use regreal::monoid::phi_system;
use regreal::shadow::{decide, unbounded_components, Certificate, CoordStatus};
use regreal::{AffineFunction, Int, Lrs, QMatrix, Rational, ZMatrix};

fn rat(v: i64) -> Rational {
    Rational::from_integer(Int::from(v))
}

fn rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

fn affine(dim: usize) -> impl Strategy<Value = AffineFunction> {
    (prop::collection::vec(-2i64..=2, dim), -3i64..=3)
        .prop_map(|(c, k)| AffineFunction::new(rats(&c), rat(k)))
}

fn square(dim: usize, lim: i64) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-lim..=lim, dim * dim).prop_map(move |v| QMatrix::new(dim, dim, rats(&v)))
}

fn point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(-4i64..=4, dim).prop_map(|v| rats(&v))
}

/// Random DFA over `{0,1,#}` with at most `max` states.
fn dfa(max: usize) -> impl Strategy<Value = Dfa> {
    (1..=max).prop_flat_map(|s| {
        (
            prop::collection::vec(0..s, s * 3),
            prop::collection::vec(any::<bool>(), s),
        )
            .prop_map(move |(t, acc)| {
                let acc: Vec<usize> = (0..s).filter(|&q| acc[q]).collect();
                Dfa::from_fn(&["0", "1", "#"], s, 0, &acc, |q, a| t[q * 3 + a]).unwrap()
            })
    })
}

fn chamber_case() -> impl Strategy<Value = (Vec<AffineFunction>, Vec<i8>, Vec<Vec<Rational>>)> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(dim, m)| {
        (
            prop::collection::vec(affine(dim), m),
            prop::collection::vec(prop::sample::select(vec![-1i8, 0, 1]), m),
            prop::collection::vec(point(dim), 12),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sign_patterns_partition_space((fs, _, pts) in chamber_case()) {
        let pats = all_patterns(fs.len()).unwrap();
        for x in &pts {
            let inside = pats.iter().filter(|p| Chamber::new(fs.clone(), p.to_vec()).unwrap().contains(x)).count();
            prop_assert_eq!(inside, 1);
        }
    }

    #[test]
    fn chamber_and_description_complement((fs, signs, pts) in chamber_case()) {
        let dim = pts[0].len();
        let chamber = Chamber::new(fs.clone(), signs).unwrap();
        let chp = ChpInstance::new(QMatrix::identity(dim), pts[0].clone(), chamber.clone()).unwrap();
        let odp = chp_to_odp(&chp).unwrap();
        for x in &pts {
            prop_assert_eq!(odp.admits(x), !chamber.contains(x));
        }
        // back again: the chambers cover exactly what the description rejects
        let back = odp_to_chp(&odp).unwrap();
        for x in &pts {
            let covered = back.iter().any(|c| c.chamber.contains(x));
            prop_assert_eq!(covered, chamber.contains(x));
            prop_assert_eq!(covered, !odp.patterns.contains(&sign_pattern(&fs, x)));
        }
    }

    #[test]
    fn skolem_chamber_embedding(d in 1usize..=3, a in prop::collection::vec(-2i64..=2, 3), b in prop::collection::vec(-2i64..=2, 3)) {
        let s = Lrs::from_i64(&a[..d], &b[..d]).unwrap();
        let c = skolem_to_chp(&s);
        let pts = orbit_points(&c.phi, &c.x0, 20);
        for (n, x) in pts.iter().enumerate() {
            prop_assert_eq!(c.chamber.contains(x), s.eval(n + d) == rat(0));
        }
    }

    #[test]
    fn subspace_sequence_matches_orbit(
        phi in square(2, 2),
        x0 in point(2),
        blocks in prop::collection::vec(prop::collection::vec(affine(2), 1..=2), 1..=2),
    ) {
        let inst = ShpInstance::new(phi, x0, blocks).unwrap();
        let r = shp_to_skolem(&inst).unwrap();
        let pts = orbit_points(&inst.phi, &inst.x0, 12);
        prop_assert_eq!(inst.start_hits(), inst.target(&pts[0]));
        for (n, x) in pts.iter().enumerate().skip(1) {
            prop_assert_eq!(r.eval(n) == rat(0), inst.target(x), "n = {}", n);
        }
    }

    #[test]
    fn polyhedron_sequence_matches_orbit(phi in square(2, 2), x0 in point(2), ineq in prop::collection::vec(affine(2), 1..=3)) {
        let inst = PlpInstance::new(phi, x0, ineq).unwrap();
        let red = plp_to_nonneg(&inst).unwrap();
        let m = red.kept.len();
        let pts = orbit_points(&inst.phi, &inst.x0, 8);
        if m > 0 {
            let vals = red.sequence.values(9 * m);
            for (s, x) in pts.iter().enumerate() {
                for (j, &i) in red.kept.iter().enumerate() {
                    prop_assert_eq!(&vals[s * m + j], &inst.inequalities[i].eval(x));
                }
            }
        }
        for &i in &red.dropped {
            prop_assert!(pts.iter().all(|x| inst.inequalities[i].eval(x) == rat(0)));
        }
        let violated = pts.iter().position(|x| inst.target(x));
        let scan = orbit_scan(&inst, 8);
        prop_assert_eq!(scan, violated.map_or(ScanOutcome::NoHitWithin(8), |n| ScanOutcome::Hit(n as u64)));
    }

    #[test]
    fn lrs_and_matrix_text_round_trip(d in 1usize..=4, a in prop::collection::vec((-9i64..=9, 1i64..=9), 4), b in prop::collection::vec(-9i64..=9, 4), m in prop::collection::vec(-50i64..=50, 6)) {
        let s = Lrs::new(a[..d].iter().map(|&(p, q)| Rational::new(Int::from(p), Int::from(q))).collect(), rats(&b[..d])).unwrap();
        prop_assert_eq!(parse_lrs(&s.to_string()).unwrap(), s);
        let z = ZMatrix::from_i64(2, 3, &m);
        prop_assert_eq!(parse_zmatrix(&write_zmatrix(&z)).unwrap(), z.clone());
        let q = z.to_rational();
        prop_assert_eq!(parse_qmatrix(&write_qmatrix(&q)).unwrap(), q);
    }

    #[test]
    fn dfa_text_round_trip(a in dfa(5)) {
        prop_assert_eq!(parse_dfa(&write_dfa(&a)).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Deciders agree with brute force at ranks 1 and 2, and every yes comes
    /// with a checked witness.
    #[test]
    fn deciders_agree_with_brute_force(a in dfa(3)) {
        for filter in [Filter::Surjective, Filter::Injective] {
            let d = decide(&a, filter).unwrap();
            let brute = (1..=2).any(|n| brute_at_rank(&a, filter, n, 5_000_000, 4).unwrap().is_some());
            if brute {
                prop_assert!(d.verdict);
            }
            if let Some(r) = d.rank.filter(|&r| r <= 2) {
                prop_assert!(brute, "decider rank {} but brute force found nothing", r);
            }
            if let Some(w) = &d.witness {
                prop_assert!(a.run_str(w).unwrap());
            }
        }
    }

    /// Growth certificates hold on the exact counts.
    #[test]
    fn unbounded_certificates(a in dfa(3)) {
        let sys = phi_system(&a).unwrap();
        let comps = unbounded_components(&sys).unwrap();
        for (r, row) in comps.certificates.iter().enumerate() {
            for (g, cert) in row.iter().enumerate() {
                match (cert, &comps.status[r][g]) {
                    (Certificate::Growing { n1, n2 }, CoordStatus::Unbounded) => {
                        prop_assert!(n1 < n2);
                        prop_assert_eq!(*n1 % comps.period, r as u64);
                        prop_assert_eq!(*n2 % comps.period, r as u64);
                        prop_assert!(sys.nu(*n1 as usize)[g] < sys.nu(*n2 as usize)[g]);
                    }
                    (Certificate::Stable { n }, CoordStatus::Bounded(v)) => {
                        prop_assert_eq!(*n % comps.period, r as u64);
                        for k in 0..3u64 {
                            prop_assert_eq!(&sys.nu((*n + k * comps.period) as usize)[g], v);
                        }
                    }
                    (c, st) => return Err(TestCaseError::fail(format!("certificate {c:?} for status {st:?}"))),
                }
            }
        }
    }

    /// Past the transient, counts never drop across one period.
    #[test]
    fn counts_monotone_across_a_period(a in dfa(3)) {
        let sys = phi_system(&a).unwrap();
        let comps = unbounded_components(&sys).unwrap();
        let v = sys.graph().vertices;
        let p = comps.period as usize;
        for n in v + 1..=v + 3 * p {
            let (lo, hi) = (sys.nu(n), sys.nu(n + p));
            for g in 0..sys.dim() {
                prop_assert!(hi[g] >= lo[g], "n = {}, g = {}, period {}", n, g, p);
            }
        }
    }
}

//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them). Tolerances and
//! budgets are pinned in the asserts, not configurable.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arion_core::affine::{affine_layer, circulant_matrix, mat_vec_mul};
use arion_core::chain::{ExponentChain, ALLOWED_D2};
use arion_core::constraints::counts::{
    count_plonk, count_r1cs, plonk_comparison_report, HashKind, Rounds,
};
use arion_core::constraints::{build_r1cs, generate_witness};
use arion_core::field::{FieldElement, PrimeModulus};
use arion_core::gtds::{gtds_ccz, gtds_forward};
use arion_core::lab::{density_experiment, exhaustive_bijection_check, mds_check};
use arion_core::merkle::{merkle_verify, MerkleTree};
use arion_core::params::{ArionParameters, GenerateOptions, Mode, SpongeParameters};
use arion_core::permutation::Direction;
use arion_core::security::{self, GbModel, SolveFlavor};
use arion_core::sponge::{arion_hash_single, pad};

fn pass(criterion: u32, what: &str) {
    println!("acceptance criterion {criterion}: PASS - {what}");
}

fn big_params(modulus: Arc<PrimeModulus>, n: usize, rounds: usize) -> ArionParameters {
    ArionParameters::generate(
        modulus,
        n,
        257,
        Mode::Standard,
        b"acceptance",
        GenerateOptions { rounds: Some(rounds), ..Default::default() },
    )
    .unwrap()
}

fn lab_params(p: u64, n: usize, d1: u64, d2: u64, rounds: usize) -> ArionParameters {
    ArionParameters::generate(
        PrimeModulus::new(BigUint::from(p)).unwrap(),
        n,
        d2,
        Mode::Standard,
        b"acceptance",
        GenerateOptions {
            rounds: Some(rounds),
            d1: Some(d1),
            allow_unsafe_d2: true,
            ..Default::default()
        },
    )
    .unwrap()
}

fn random_states(
    modulus: &Arc<PrimeModulus>,
    n: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<FieldElement>> {
    use num_bigint::RandBigInt;
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| modulus.element(rng.gen_biguint_below(modulus.value())))
                .collect()
        })
        .collect()
}

#[test]
fn criterion_1_permutation_roundtrip() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    // The d1=3 big-prime instances named alongside these shapes are
    // unconstructible (3 divides p - 1 for both built-in primes), so the
    // smallest admissible exponent d1 = 5 is used at the same round counts.
    use rayon::prelude::*;
    for modulus in [PrimeModulus::bls12(), PrimeModulus::bn254()] {
        for (n, rounds) in [(3usize, 6usize), (8, 4)] {
            let params = big_params(modulus.clone(), n, rounds);
            assert_eq!(params.d1(), 5);
            assert_eq!(params.validate(), vec![]);
            let states = random_states(&modulus, n, 1000, &mut rng);
            let keys = random_states(&modulus, n, 1000, &mut rng);
            let roundtripped: Vec<_> = states
                .par_iter()
                .zip(keys.par_iter())
                .map(|(s, k)| {
                    let ct =
                        arion_core::arion_permute(s, Some(k), &params, Direction::Forward).unwrap();
                    arion_core::arion_permute(&ct, Some(k), &params, Direction::Inverse).unwrap()
                })
                .collect();
            assert_eq!(roundtripped, states, "round-trip failed for n={n}");
        }
    }
    // Exhaustive bijectivity over the 121-state grid.
    assert!(exhaustive_bijection_check(&lab_params(11, 2, 3, 3, 6)).unwrap());
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    pass(1, &format!("inverse∘forward identity on 4 big-prime instances, exhaustive bijectivity on p=11 n=2 ({elapsed:?})"));
}

#[test]
fn criterion_2_addition_chains() {
    let expected_counts: [(u64, usize); 8] = [
        (121, 9),
        (123, 9),
        (125, 9),
        (129, 8),
        (161, 9),
        (193, 9),
        (195, 9),
        (257, 9),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xA2);
    for modulus in [PrimeModulus::bls12(), PrimeModulus::bn254()] {
        for (d2, count) in expected_counts {
            let chain = ExponentChain::for_exponent(d2).unwrap();
            assert_eq!(chain.multiplications(), count, "d2={d2}");
            use num_bigint::RandBigInt;
            for _ in 0..1000 {
                let x = modulus.element(rng.gen_biguint_below(modulus.value()));
                let (value, performed) = chain.evaluate(&x);
                assert_eq!(value, x.pow(&BigUint::from(d2)));
                assert_eq!(performed, count);
            }
        }
    }
    assert_eq!(ALLOWED_D2.len(), 8);
    pass(2, "all eight chains match generic exponentiation with the pinned multiplication counts");
}

#[test]
fn criterion_3_affine_layer_and_mds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA3);
    let bn = PrimeModulus::bn254();
    use num_bigint::RandBigInt;
    for n in 2..=8usize {
        let matrix = circulant_matrix(n, &bn);
        for _ in 0..1000 {
            let v: Vec<_> = (0..n).map(|_| bn.element(rng.gen_biguint_below(bn.value()))).collect();
            assert_eq!(affine_layer(&v, None).unwrap(), mat_vec_mul(&matrix, &v).unwrap());
        }
    }
    for n in 2..=4usize {
        for modulus in [
            PrimeModulus::new(BigUint::from(131u32)).unwrap(),
            PrimeModulus::new(BigUint::from(10007u32)).unwrap(),
            PrimeModulus::bn254(),
        ] {
            assert!(mds_check(n, &modulus).unwrap(), "n={n}");
        }
    }
    pass(3, "O(n) mixing rule equals the naive circulant product for n=2..8; circ(1..n) is MDS for n<=4 over 131/10007/bn254");
}

#[test]
fn criterion_4_ccz_graph_property() {
    // Exhaustive over p = 11 for both widths.
    for n in [2usize, 3] {
        let params = lab_params(11, n, 3, 3, 6);
        let m = params.modulus();
        let total = 11u64.pow(n as u32);
        for idx in 0..total {
            let mut rem = idx;
            let state: Vec<_> = (0..n)
                .map(|_| {
                    let v = rem % 11;
                    rem /= 11;
                    m.element_from_u64(v)
                })
                .collect();
            let y = gtds_forward(&state, &params, 0).unwrap();
            let mut swapped = state.clone();
            swapped[n - 1] = y[n - 1].clone();
            let g = gtds_ccz(&swapped, &params, 0).unwrap();
            assert_eq!(&g[..n - 1], &y[..n - 1]);
            assert_eq!(g[n - 1], state[n - 1]);
        }
    }
    // 10^4 random samples over bn254.
    let params = big_params(PrimeModulus::bn254(), 3, 6);
    let m = params.modulus().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA4);
    let states = random_states(&m, 3, 10_000, &mut rng);
    use rayon::prelude::*;
    states.par_iter().for_each(|state| {
        let y = gtds_forward(state, &params, 0).unwrap();
        let mut swapped = state.clone();
        swapped[2] = y[2].clone();
        let g = gtds_ccz(&swapped, &params, 0).unwrap();
        assert_eq!(&g[..2], &y[..2]);
        assert_eq!(g[2], state[2]);
    });
    pass(4, "graph swap relation holds exhaustively on p=11 (n=2,3) and on 10^4 bn254 samples");
}

#[test]
fn criterion_5_r1cs_counts_and_soundness() {
    // Published cells, exact.
    let cells = [
        (HashKind::ArionHash, 3u64, 3u64, 102u64),
        (HashKind::ArionHash, 4, 3, 126),
        (HashKind::ArionHash, 8, 3, 148),
        (HashKind::Poseidon, 3, 3, 216),
        (HashKind::Poseidon, 3, 5, 240),
        (HashKind::Griffin, 3, 3, 96),
        (HashKind::Anemoi, 4, 3, 96),
    ];
    for (kind, n, d, expect) in cells {
        assert_eq!(count_r1cs(kind, n, d, Some(257), None).unwrap(), expect, "{kind:?} n={n} d={d}");
    }

    // Builder emits exactly the formula count for the published shapes
    // (d1 = 3 needs a prime with gcd(3, p-1) = 1, so 10007 carries those).
    for (n, d1, rounds) in [(3usize, 3u64, 6usize), (4, 3, 6), (8, 3, 4)] {
        let params = lab_params(10007, n, d1, 257, rounds);
        let sponge = SpongeParameters::default_for(&params).unwrap();
        let cs = build_r1cs(&params, &sponge, sponge.rate).unwrap();
        let formula = count_r1cs(
            HashKind::ArionHash,
            n as u64,
            d1,
            Some(257),
            Some(Rounds::Simple(rounds as u64)),
        )
        .unwrap();
        assert_eq!(cs.constraints.len() as u64, formula);
    }

    // Honest witness on a big-prime instance, then perturbation soundness.
    let params = big_params(PrimeModulus::bn254(), 3, 6);
    let sponge = SpongeParameters::default_for(&params).unwrap();
    let m = params.modulus();
    let message: Vec<_> = (0..2u64).map(|v| m.element_from_u64(v + 11)).collect();
    let (cs, witness) = generate_witness(&message, &params, &sponge).unwrap();
    assert_eq!(
        cs.constraints.len() as u64,
        count_r1cs(HashKind::ArionHash, 3, 5, Some(257), Some(Rounds::Simple(6))).unwrap()
    );
    assert!(cs.is_satisfied(&witness));
    assert_eq!(
        cs.output_value(&witness).unwrap(),
        arion_hash_single(&message, &params, &sponge).unwrap()
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0xA5);
    use num_bigint::RandBigInt;
    for _ in 0..100 {
        let var = rng.gen_range(1..cs.num_vars);
        let delta = m.element(rng.gen_biguint_below(m.value()));
        if delta.is_zero() {
            continue;
        }
        let mut tampered = witness.clone();
        tampered.assignment[var] = tampered.assignment[var].add(&delta).unwrap();
        assert!(
            !cs.failing_constraints(&tampered).is_empty(),
            "perturbing var {var} violated nothing"
        );
    }
    pass(5, "published R1CS cells, builder/formula agreement, honest witness satisfies, 100 perturbations all caught");
}

#[test]
fn criterion_6_plonk_counts_and_deviation_snapshot() {
    assert_eq!(count_plonk(HashKind::ArionHash, 3, 3, 3, Some(257), None).unwrap(), 147);
    assert_eq!(count_plonk(HashKind::ArionHash, 3, 4, 5, Some(257), None).unwrap(), 192);

    // The published 2-wire n=3 cells were generated with the 4(n-1) mixing
    // layout; the counting rule uses the cheaper generic matrix for n <= 3.
    // The deviating cells are a frozen snapshot.
    let rows = plonk_comparison_report();
    let deviating: Vec<_> = rows
        .iter()
        .filter(|r| r.deviates)
        .map(|r| (r.kind, r.wires, r.d1, r.n, r.formula, r.published))
        .collect();
    assert_eq!(
        deviating,
        vec![
            (HashKind::ArionHash, 2, 3, 3, 186, 200),
            (HashKind::ArionHash, 2, 5, 3, 198, 212),
            (HashKind::AggressiveArionHash, 2, 3, 3, 156, 168),
            (HashKind::AggressiveArionHash, 2, 5, 3, 134, 144),
        ]
    );
    for row in rows.iter().filter(|r| !r.deviates) {
        assert_eq!(row.formula, row.published);
    }
    pass(6, "3-wire cells 147/192 exact; the four known 2-wire n=3 deviations and nothing else");
}

#[test]
fn criterion_7_security_estimators() {
    let started = Instant::now();

    // Single characteristic.
    for (r, n_bits, expect) in [(1u64, 250.0, 241i64), (2, 120.0, 222), (3, 60.0, 153)] {
        assert_eq!(security::kappa_diff_trail(n_bits, 9.0, r).floor() as i64, expect);
    }
    // Full differential hull.
    for (n_bits, n, r, expect) in [
        (250.0, 3u64, 6u64, 121i64),
        (250.0, 4, 5, 113),
        (250.0, 6, 5, 49),
        (60.0, 3, 6, 35),
        (60.0, 6, 5, 15),
    ] {
        let (_, kappa) = security::kappa_diff_full_hull_auto(n_bits, n, r, 257).unwrap();
        assert_eq!(kappa.floor() as i64, expect, "hull n={n} r={r} N={n_bits}");
    }
    // Restricted hulls, differential and linear, share the published levels.
    for (n_bits, r, expect) in [(250.0, 3u64, 475i64), (120.0, 4, 267), (60.0, 5, 139)] {
        assert_eq!(
            security::kappa_diff_restricted(n_bits, r, 257, n_bits / 2.0).floor() as i64,
            expect
        );
        assert_eq!(
            security::kappa_linear_restricted(n_bits, r, 257, n_bits / 2.0).floor() as i64,
            expect
        );
    }
    // Truncated, first round and two rounds.
    for (n_bits, n, hull, expect) in [(250.0, 3u64, 250.0, 475i64), (120.0, 3, 120.0, 215), (60.0, 4, 100.0, 107)] {
        assert_eq!(
            security::kappa_truncated_first_round(n_bits, n, 257, hull).floor() as i64,
            expect
        );
    }
    for (n_bits, r, expect) in [(250.0, 4u64, 233i64), (120.0, 5, 155), (60.0, 6, 87)] {
        assert_eq!(
            security::kappa_truncated_two_round(n_bits, r, 257, n_bits / 2.0).floor() as i64,
            expect
        );
    }
    // Linear trails.
    for (n_bits, r, data, expect) in [(250.0, 2u64, 250.0, 216i64), (250.0, 3, 500.0, 198), (60.0, 5, 60.0, 152)] {
        assert_eq!(
            security::kappa_linear_trail(n_bits, 9.0, r, data).floor() as i64,
            expect
        );
    }
    // Solving-cost columns within one bit.
    let solving = [
        (GbModel::Arion, 3u64, 6u64, SolveFlavor::Probabilistic, 143i64),
        (GbModel::Arion, 3, 6, SolveFlavor::Deterministic, 207),
        (GbModel::ArionHash, 3, 5, SolveFlavor::Probabilistic, 110),
        (GbModel::ArionHash, 3, 5, SolveFlavor::Deterministic, 158),
    ];
    for (model, n, r, flavor, expect) in solving {
        let bits = security::gb_solving_bits(model, n, r, 3, 121, 2.0, flavor).unwrap();
        assert!(
            (bits.floor() as i64 - expect).abs() <= 1,
            "{model:?}/{flavor:?}: {bits} vs {expect}"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1 s");
    pass(7, &format!("trail/hull/truncated/linear cells bit-exact, solving columns within 1 bit ({elapsed:?})"));
}

#[test]
fn criterion_8_quotient_dimensions() {
    use security::quotient_dim;
    let cipher: [(u64, u64, u64, u64); 7] = [
        (2, 3, 7, 35),
        (2, 3, 257, 1285),
        (3, 3, 7, 175),
        (4, 3, 7, 875),
        (2, 5, 7, 49),
        (2, 5, 257, 1799),
        (3, 5, 7, 343),
    ];
    for (n, d1, d2, expect) in cipher {
        assert_eq!(quotient_dim(GbModel::Arion, n, 1, d1, d2), BigUint::from(expect));
    }
    let hash: [(u64, u64, u64, u64); 12] = [
        (2, 3, 7, 35),
        (2, 3, 257, 1285),
        (3, 3, 7, 91),
        (3, 3, 257, 3341),
        (4, 3, 7, 203),
        (5, 3, 7, 427),
        (2, 5, 7, 49),
        (2, 5, 257, 1799),
        (3, 5, 7, 133),
        (3, 5, 257, 4883), // published cell prints 4833; deviation flagged below
        (4, 5, 7, 301),
        (5, 5, 7, 637),
    ];
    for (n, d1, d2, expect) in hash {
        assert_eq!(quotient_dim(GbModel::ArionHash, n, 1, d1, d2), BigUint::from(expect));
    }
    // The one published cell the formula cannot reproduce: 4833 against a
    // computed 4883; every sibling cell matches, so the published digits are
    // treated as transposed and the deviation is pinned instead of hidden.
    let deviating = quotient_dim(GbModel::ArionHash, 3, 1, 5, 257);
    assert_eq!(deviating, BigUint::from(4883u32));
    assert_ne!(deviating, BigUint::from(4833u32));
    println!(
        "acceptance criterion 8: NOTE - hash dimension (n=3, d1=5, d2=257) computes to 4883; \
         the published table prints 4833 and is flagged as a transposition"
    );

    let collision: [(u64, u64, u64, u64, u64); 11] = [
        (2, 1, 3, 3, 225),
        (2, 2, 3, 3, 50625),
        (2, 1, 5, 5, 1225),
        (2, 1, 3, 7, 1225),
        (3, 1, 3, 7, 8281),
        (2, 1, 5, 7, 2401),
        (3, 1, 3, 3, 1521),
        (3, 1, 5, 5, 9025),
        (3, 1, 5, 7, 17689),
        (4, 1, 3, 3, 7569),
        (4, 1, 3, 7, 41209),
    ];
    for (n, r, d1, d2, expect) in collision {
        assert_eq!(quotient_dim(GbModel::Collision, n, r, d1, d2), BigUint::from(expect));
    }
    pass(8, "all cipher/collision cells and 11/12 hash cells exact; the 4833 cell deviates by a pinned transposition");
}

#[test]
fn criterion_9_density_experiment() {
    let started = Instant::now();
    // (prime, density bound) with every (d1, d2) in {3,5}^2 coprime to p-1.
    let bounds = [(11u64, 0.82f64), (13, 0.91), (17, 0.91), (19, 0.92), (23, 0.90)];
    for (p, bound) in bounds {
        for d1 in [3u64, 5] {
            for d2 in [3u64, 5] {
                let p_minus_1 = p - 1;
                if num_integer::gcd(d1, p_minus_1) != 1 || num_integer::gcd(d2, p_minus_1) != 1 {
                    continue;
                }
                let reports = density_experiment(&[p], 3, d1, d2, 5, 2).unwrap();
                let r = &reports[0];
                assert!(
                    r.min_density >= bound,
                    "p={p} d1={d1} d2={d2}: min density {} below {bound}",
                    r.min_density
                );
                assert_eq!(r.max_total_degree, 3 * (p - 1) - 1, "p={p} d1={d1} d2={d2}");
                assert_eq!(r.max_univariate_degree, p - 1, "p={p} d1={d1} d2={d2}");
                assert_eq!(r.seeds.len(), 5);
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}, budget 5 min");
    pass(9, &format!("2-round density/degree profile meets every published bound ({elapsed:?})"));
}

#[test]
fn criterion_10_sponge_and_merkle() {
    let params = big_params(PrimeModulus::bn254(), 3, 6);
    let m = params.modulus().clone();
    let sponge = SpongeParameters::default_for(&params).unwrap();

    // Padding rules.
    let msg: Vec<_> = (1..=4u64).map(|v| m.element_from_u64(v)).collect();
    let (padded, tag) = pad(&msg, 2, &params).unwrap();
    assert_eq!(padded.len(), 4);
    assert!(tag.is_none());
    let (padded, tag) = pad(&msg[..3], 2, &params).unwrap();
    assert_eq!(padded.len(), 4);
    assert_eq!(tag.unwrap(), m.element_from_u64(3));

    // hash(m) != hash(m || 0) for random full-rate messages.
    let mut rng = ChaCha8Rng::seed_from_u64(0xAA);
    use num_bigint::RandBigInt;
    for _ in 0..25 {
        let msg: Vec<_> = (0..sponge.rate)
            .map(|_| m.element(rng.gen_biguint_below(m.value())))
            .collect();
        let mut extended = msg.clone();
        extended.push(m.zero());
        assert_ne!(
            arion_hash_single(&msg, &params, &sponge).unwrap(),
            arion_hash_single(&extended, &params, &sponge).unwrap()
        );
    }

    // Merkle: honest paths accepted, 100 random tamperings rejected.
    let leaves: Vec<_> = (0..16u64).map(|v| m.element_from_u64(v * 3 + 1)).collect();
    let tree = MerkleTree::build(&leaves, &params, 2).unwrap();
    for (i, leaf) in leaves.iter().enumerate() {
        let path = tree.path(i).unwrap();
        assert!(merkle_verify(leaf, &path, tree.root(), &params, 2).unwrap());
    }
    for t in 0..100 {
        let i = rng.gen_range(0..leaves.len());
        let mut path = tree.path(i).unwrap();
        let lvl = rng.gen_range(0..path.siblings.len());
        let tampered = m.element(rng.gen_biguint_below(m.value()));
        if tampered.to_hex() == path.siblings[lvl][0] {
            continue;
        }
        path.siblings[lvl][0] = tampered.to_hex();
        assert!(
            !merkle_verify(&leaves[i], &path, tree.root(), &params, 2).unwrap(),
            "tampering {t} accepted"
        );
    }
    pass(10, "padding rules, length-encoding separation, honest Merkle paths accepted and 100 tamperings rejected");
}

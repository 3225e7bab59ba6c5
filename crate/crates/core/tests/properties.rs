//! Structural invariants as property tests over seeded random instances.

use modnuc::fields::Sign;
use modnuc::linalg::{inner, max_abs, max_abs_diff, min_eigenvalue, real_scalar, CMatrix, I};
use modnuc::nuclearity::nuclear_bound;
use modnuc::one_particle::{combine_t, trace_norm};
use modnuc::{random, FieldContext, FockOperator, FockSpace, Parity};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

fn context(seed: u64, d: usize) -> FieldContext {
    let mut rng = random::rng(seed);
    let space = random::space(&mut rng, d);
    let pair = random::pair(&mut rng, &space);
    FieldContext::new(&FockSpace::new(&space).unwrap(), &pair).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn gamma_is_an_antiunitary_involution(seed in any::<u64>(), d in 1usize..=6) {
        let mut rng = random::rng(seed);
        let space = random::space(&mut rng, d);
        let a = random::vector(&mut rng, d);
        let b = random::vector(&mut rng, d);
        let (ga, gb) = (space.gamma(&a).unwrap(), space.gamma(&b).unwrap());
        prop_assert!((inner(&ga, &gb) - inner(&b, &a)).norm() < 1e-12);
        prop_assert!((space.gamma(&ga).unwrap() - &a).norm() < 1e-12);
        let z = real_scalar(0.3) + I * 1.7;
        let lhs = space.gamma(&(&a * z)).unwrap();
        prop_assert!((lhs - ga * z.conj()).norm() < 1e-12);
    }

    #[test]
    fn trace_norm_is_subadditive(seed in any::<u64>(), d in 1usize..=6) {
        let mut rng = random::rng(seed);
        let a = random::matrix(&mut rng, d, d);
        let b = random::matrix(&mut rng, d, d);
        prop_assert!(trace_norm(&(&a + &b)) <= trace_norm(&a) + trace_norm(&b) + 1e-12);
    }

    #[test]
    fn combined_t_is_the_positive_root(seed in any::<u64>(), d in 1usize..=6, rank in 0usize..=6) {
        let mut rng = random::rng(seed);
        let k = rank.min(d);
        let a = random::matrix(&mut rng, d, k) * random::matrix(&mut rng, k, d);
        let b = random::contraction(&mut rng, d, 1.0);
        let t = combine_t(&a, &b).unwrap();
        let sq = a.adjoint() * &a + b.adjoint() * &b;
        prop_assert!((&t * &t - &sq).norm() < 1e-12);
        prop_assert!(min_eigenvalue(&t) > -1e-12);
        // T² ⪰ |T_φ|², so T ⪰ |T_φ| by operator monotonicity of the root
        let abs_a = combine_t(&a, &CMatrix::zeros(d, d)).unwrap();
        prop_assert!(min_eigenvalue(&(&t - &abs_a)) > -1e-10);
        prop_assert!(trace_norm(&t) <= trace_norm(&a) + trace_norm(&b) + 1e-12);
    }

    #[test]
    fn second_quantization_is_multiplicative(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = random::rng(seed);
        let fock = FockSpace::new(&random::space(&mut rng, d)).unwrap();
        let x = random::matrix(&mut rng, d, d);
        let y = random::matrix(&mut rng, d, d);
        let lx = fock.second_quantize(&x).unwrap();
        let ly = fock.second_quantize(&y).unwrap();
        let lxy = fock.second_quantize(&(&x * &y)).unwrap();
        prop_assert!(max_abs_diff(&(lx.matrix() * ly.matrix()), lxy.matrix()) < 1e-12);
        let adj = fock.second_quantize(&x.adjoint()).unwrap();
        prop_assert!(max_abs_diff(&lx.matrix().adjoint(), adj.matrix()) < 1e-12);
    }

    #[test]
    fn canonical_anticommutation(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = random::rng(seed);
        let fock = FockSpace::new(&random::space(&mut rng, d)).unwrap();
        let p = random::vector(&mut rng, d);
        let q = random::vector(&mut rng, d);
        let c = fock.creator(&q).unwrap().into_matrix();
        let a = fock.annihilator(&p).unwrap().into_matrix();
        let id = CMatrix::identity(fock.dim(), fock.dim());
        prop_assert!(max_abs(&(&a * &c + &c * &a - id * inner(&p, &q))) < 1e-12);
        prop_assert!(max_abs(&(&c * &c)) < 1e-12);
    }

    #[test]
    fn derivations_are_real_linear(seed in any::<u64>(), d in 1usize..=3, s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let ctx = context(seed, d);
        let mut rng = random::rng(seed ^ 0x5eed);
        let p1 = random::vector(&mut rng, d);
        let p2 = random::vector(&mut rng, d);
        let a = ctx.random_polynomial(2, seed);
        for sign in [Sign::Plus, Sign::Minus] {
            let combo = &p1 * real_scalar(s) + &p2 * real_scalar(t);
            let lhs = ctx.delta(sign, &combo, &a).unwrap();
            let rhs = ctx.delta(sign, &p1, &a).unwrap().matrix() * real_scalar(s)
                + ctx.delta(sign, &p2, &a).unwrap().matrix() * real_scalar(t);
            prop_assert!(max_abs_diff(lhs.matrix(), &rhs) < 1e-10);
        }
    }

    #[test]
    fn derivations_flip_parity(seed in any::<u64>(), d in 1usize..=3) {
        let ctx = context(seed, d);
        let mut rng = random::rng(seed ^ 0xf11b);
        let psi = random::vector(&mut rng, d);
        let graded = ctx.grade(&ctx.random_polynomial(3, seed));
        for sign in [Sign::Plus, Sign::Minus] {
            let from_even = ctx.grade(&ctx.delta(sign, &psi, &graded.even_part).unwrap());
            let from_odd = ctx.grade(&ctx.delta(sign, &psi, &graded.odd_part).unwrap());
            prop_assert!(max_abs(from_even.even_part.matrix()) < 1e-12);
            prop_assert!(max_abs(from_odd.odd_part.matrix()) < 1e-12);
        }
    }

    #[test]
    fn graded_leibniz_rule(seed in any::<u64>(), d in 1usize..=3) {
        let ctx = context(seed, d);
        let mut rng = random::rng(seed ^ 0x1e1b);
        let psi = random::vector(&mut rng, d);
        let graded = ctx.grade(&ctx.random_polynomial(3, seed));
        let b = ctx.random_polynomial(2, seed.wrapping_add(1));
        for sign in [Sign::Plus, Sign::Minus] {
            let db = ctx.delta(sign, &psi, &b).unwrap();
            for (part, s) in [(&graded.even_part, 1.0), (&graded.odd_part, -1.0)] {
                let product = ctx.fock().operator(part.matrix() * b.matrix()).unwrap();
                let lhs = ctx.delta(sign, &psi, &product).unwrap();
                let rhs = ctx.delta(sign, &psi, part).unwrap().matrix() * b.matrix()
                    + part.matrix() * db.matrix() * real_scalar(s);
                prop_assert!(max_abs_diff(lhs.matrix(), &rhs) < 1e-10);
            }
        }
    }

    /// One step of the induction over field monomials: with `F` odd,
    /// `{F, φ(ξ)}` is a scalar and the graded commutator with `φ(ξ)A`
    /// reduces to the one with `A`.
    #[test]
    fn commutator_recursion(seed in any::<u64>(), d in 1usize..=3, n in 0usize..=3) {
        let ctx = context(seed, d);
        let mut rng = random::rng(seed ^ 0xcafe);
        let psi = random::vector(&mut rng, d);
        let fields: Vec<FockOperator> = (0..=n).map(|_| ctx.field_phi(&random::vector(&mut rng, d)).unwrap()).collect();
        let dim = ctx.fock().dim();
        let mut monomial = CMatrix::identity(dim, dim);
        for f in &fields[1..] {
            monomial *= f.matrix();
        }
        let head = fields[0].matrix();
        for sign in [Sign::Plus, Sign::Minus] {
            let f = ctx.derivation_generator(sign, &psi).unwrap() * real_scalar(0.5);
            let anti = &f * head + head * &f;
            let scalar = anti[(0, 0)];
            prop_assert!(max_abs_diff(&anti, &(CMatrix::identity(dim, dim) * scalar)) < 1e-12);
            let longer = head * &monomial;
            let (outer, inner_bracket) = if n % 2 == 0 {
                // A even, φA odd
                (&f * &longer + &longer * &f, &f * &monomial - &monomial * &f)
            } else {
                (&f * &longer - &longer * &f, &f * &monomial + &monomial * &f)
            };
            let rhs = &monomial * scalar - head * inner_bracket;
            prop_assert!(max_abs_diff(&outer, &rhs) < 1e-10);
        }
    }

    #[test]
    fn bound_chain_on_random_pairs(seed in any::<u64>(), d in 1usize..=8) {
        let mut rng = random::rng(seed);
        let a = random::contraction(&mut rng, d, 1.0);
        let b = random::contraction(&mut rng, d, 1.0);
        let r = nuclear_bound(&a, &b).unwrap();
        prop_assert!(r.det_bound >= 1.0);
        prop_assert!(r.det_bound <= r.exp_t_bound * (1.0 + 1e-12));
        prop_assert!(r.exp_t_bound <= r.exp_bound * (1.0 + 1e-12));
        let subset = r.subset_sum.unwrap();
        prop_assert!((subset - r.det_bound).abs() <= 1e-12 * r.det_bound);
    }

    #[test]
    fn grading_is_an_involution(seed in any::<u64>(), d in 1usize..=3) {
        let ctx = context(seed, d);
        let a = ctx.random_polynomial(3, seed);
        let twice = ctx.grading(&ctx.grading(&a));
        prop_assert!(max_abs_diff(twice.matrix(), a.matrix()) < 1e-14);
        let g = ctx.grade(&a);
        prop_assert!(g.even_part.op_norm() <= a.op_norm() + 1e-10);
        prop_assert!(g.odd_part.op_norm() <= a.op_norm() + 1e-10);
        prop_assert_eq!(g.even_part.parity(), Parity::Even);
    }
}

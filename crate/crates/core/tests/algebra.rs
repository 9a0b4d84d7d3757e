use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ctx_core::cayley::enumerate;
use ctx_core::ct::{build_generating_set, lift_transvection, BasisVec, Form, LMat};
use ctx_core::field::{Fe, FieldCtx, FieldTower};
use ctx_core::laurent::{LPoly, LaurentRing};
use ctx_core::pipeline::{setup, slice_generators, Point};
use ctx_core::specialize::{specialize, FMat, SpecContext};

fn random_fe(f: &FieldCtx, rng: &mut impl Rng) -> Fe {
    let digits: Vec<u32> = (0..f.k()).map(|_| rng.gen_range(0..f.p())).collect();
    f.from_digits(&digits)
}

fn random_poly(f: &FieldCtx, rng: &mut impl Rng, width: usize) -> LPoly {
    let lo = rng.gen_range(-6..=6);
    let coeffs = (0..rng.gen_range(1..=width))
        .map(|_| random_fe(f, rng))
        .collect();
    LPoly::from_coeffs(lo, coeffs).unwrap()
}

fn random_word(
    gens: &[LMat],
    ring: &LaurentRing,
    dim: usize,
    len: usize,
    rng: &mut impl Rng,
) -> LMat {
    let mut g = LMat::identity(ring, dim);
    for _ in 0..len {
        g = g.mul(&gens[rng.gen_range(0..gens.len())], ring);
    }
    g
}

fn towers() -> Vec<FieldTower> {
    [(2, 1), (2, 2), (3, 1), (5, 1), (4, 1), (3, 2)]
        .iter()
        .map(|&(q, s)| FieldTower::unitary(q, s).unwrap())
        .collect()
}

fn normalized(f: &LPoly) -> bool {
    f.is_zero() || (!f.coeff(f.lo()).is_zero() && !f.coeff(f.hi()).is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_a_field_automorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // a tower above the exhaustive range
        let tower = FieldTower::unitary(5, 3).unwrap();
        let ext = tower.ext();
        for _ in 0..50 {
            let (x, y) = (random_fe(ext, &mut rng), random_fe(ext, &mut rng));
            prop_assert_eq!(tower.conj(ext.mul(x, y)), ext.mul(tower.conj(x), tower.conj(y)));
            prop_assert_eq!(tower.conj(ext.add(x, y)), ext.add(tower.conj(x), tower.conj(y)));
            prop_assert_eq!(tower.conj(tower.conj(x)), x);
        }
    }

    #[test]
    fn evaluation_twists_sigma_into_conjugation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for tower in towers() {
            let ring = LaurentRing::new(tower.base().clone());
            let f = random_poly(tower.base(), &mut rng, 10);
            let a = tower.a();
            let lhs = ring.eval(&f.sigma(), &tower, a).unwrap();
            let rhs = tower.conj(ring.eval(&f, &tower, a).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn exact_division_undoes_multiplication(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for q in [2u64, 3, 4, 5, 9] {
            let base = ctx_core::field::base_field(q).unwrap();
            let ring = LaurentRing::new(base.clone());
            let f = random_poly(&base, &mut rng, 8);
            let g = random_poly(&base, &mut rng, 5);
            if g.is_zero() {
                continue;
            }
            let fg = ring.mul(&f, &g);
            prop_assert!(normalized(&fg) && normalized(&ring.add(&f, &g)) && normalized(&ring.sub(&f, &f)));
            prop_assert_eq!(ring.divide_exact(&fg, &g).unwrap(), f);
        }
    }

    #[test]
    fn form_is_sesquilinear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = ctx_core::field::base_field(3).unwrap();
        let ring = LaurentRing::new(base.clone());
        let form = Form::new(2, ring.clone()).unwrap();
        let vec = |rng: &mut ChaCha8Rng| -> Vec<LPoly> { (0..4).map(|_| random_poly(&base, rng, 3)).collect() };
        let (x, x2, y, y2) = (vec(&mut rng), vec(&mut rng), vec(&mut rng), vec(&mut rng));
        let c = random_poly(&base, &mut rng, 3);
        let add = |u: &[LPoly], v: &[LPoly]| -> Vec<LPoly> { u.iter().zip(v).map(|(a, b)| ring.add(a, b)).collect() };
        let scale = |u: &[LPoly]| -> Vec<LPoly> { u.iter().map(|a| ring.mul(&c, a)).collect() };
        let b = |u: &[LPoly], v: &[LPoly]| form.value(u, v).unwrap();
        prop_assert_eq!(b(&add(&x, &x2), &y), ring.add(&b(&x, &y), &b(&x2, &y)));
        prop_assert_eq!(b(&x, &add(&y, &y2)), ring.add(&b(&x, &y), &b(&x, &y2)));
        prop_assert_eq!(b(&scale(&x), &y), ring.mul(&c, &b(&x, &y)));
        prop_assert_eq!(b(&x, &scale(&y)), ring.mul(&c.sigma(), &b(&x, &y)));
    }

    #[test]
    fn matrix_products_associate_and_determinants_multiply(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = LaurentRing::new(ctx_core::field::base_field(3).unwrap());
        let form = Form::new(2, ring.clone()).unwrap();
        let gens: Vec<LMat> = build_generating_set(&form).unwrap().gens.into_iter().map(|g| g.mat).collect();
        let [a, b, c] = [0, 1, 2].map(|_| random_word(&gens, &ring, 4, rng.gen_range(0..6), &mut rng));
        prop_assert_eq!(a.mul(&b, &ring).mul(&c, &ring), a.mul(&b.mul(&c, &ring), &ring));
        prop_assert_eq!(a.mul(&b, &ring).det(&ring), ring.mul(&a.det(&ring), &b.det(&ring)));
        prop_assert!(form.is_form_preserving(&a.mul(&b, &ring)));
    }

    #[test]
    fn specialization_is_a_homomorphism_and_transports_determinants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (q, s) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let tower = FieldTower::unitary(q, s).unwrap();
            let ring = LaurentRing::new(tower.base().clone());
            let form = Form::new(2, ring.clone()).unwrap();
            let gens: Vec<LMat> = build_generating_set(&form).unwrap().gens.into_iter().map(|g| g.mat).collect();
            let ctx = SpecContext::new(2, tower.clone()).unwrap();
            let g = random_word(&gens, &ring, 4, rng.gen_range(0..8), &mut rng);
            let h = random_word(&gens, &ring, 4, rng.gen_range(0..8), &mut rng);
            let (eg, eh) = (specialize(&g, &ctx).unwrap(), specialize(&h, &ctx).unwrap());
            prop_assert_eq!(specialize(&g.mul(&h, &ring), &ctx).unwrap(), eg.mul(&eh, ctx.field()));
            prop_assert_eq!(ctx.det(&eg), ring.eval(&g.det(&ring), &tower, tower.a()).unwrap());
            prop_assert!(ctx.is_unitary(&eg).unwrap());
        }
    }
}

#[test]
fn specialized_lifts_are_the_finite_transvections() {
    for (q, s) in [(2u64, 1u32), (2, 2), (3, 1), (3, 2)] {
        let tower = FieldTower::unitary(q, s).unwrap();
        let form = Form::new(2, LaurentRing::new(tower.base().clone())).unwrap();
        let ctx = SpecContext::new(2, tower.clone()).unwrap();
        for v in BasisVec::all(2) {
            for lambda in tower.admissible_params() {
                let lift = lift_transvection(&form, v, lambda, &tower).unwrap();
                assert_eq!(
                    specialize(&lift.phi, &ctx).unwrap(),
                    ctx.finite_transvection(v, lambda).unwrap(),
                    "q={q} s={s} {v}"
                );
            }
        }
    }
}

#[test]
fn unitary_matrices_are_closed_in_su4_2() {
    let st = setup(2, 2, 1, Point::Root).unwrap();
    let (ctx, f) = (&st.ctx, st.ctx.field());
    let mats: Vec<FMat> = st.images.iter().map(|(_, m)| m.clone()).collect();
    let image = enumerate(&mats, f, 1 << 20).unwrap();
    let slice = slice_generators(ctx, &st.images, &image).unwrap();
    let gens: Vec<FMat> = slice.gens.iter().map(|(_, m)| m.clone()).collect();
    let table = enumerate(&gens, f, 1 << 20).unwrap();
    assert_eq!(table.len(), 25920);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a = table.element(rng.gen_range(0..table.len()));
        let b = table.element(rng.gen_range(0..table.len()));
        assert!(ctx.is_unitary(&a.mul(&b, f)).unwrap());
        assert!(ctx.is_unitary(&a.inverse(f).unwrap()).unwrap());
        assert_eq!(ctx.det(&a.mul(&b, f)), f.one());
    }
}

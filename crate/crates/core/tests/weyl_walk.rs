use modcheck::symbolic::Affine;
use modcheck::walk::*;
use modcheck::{q, qi, Q};
use proptest::prelude::*;

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn aff(s: &str) -> Affine {
    s.parse().unwrap()
}

#[test]
fn affine_parse_roundtrip() {
    for t in ["s-23", "6-s", "2s-19", "-13", "(1/2)s-1", "s", "-s+6", "0", "3s"] {
        let a = aff(t);
        assert_eq!(aff(&a.to_string()), a, "{t}");
    }
    assert_eq!(aff("6-s"), Affine::int(-1, 6));
    assert_eq!(aff("2s-19"), Affine::int(2, -19));
    assert_eq!(aff("-13"), Affine::int(0, -13));
    assert!("s+".parse::<Affine>().is_err());
    assert!("x-1".parse::<Affine>().is_err());
}

#[test]
fn first_line_of_table() {
    let f4 = RootModel::f4();
    let l = f4.reflect(&f4_lambda(), 1).unwrap();
    assert_eq!(l, char_from_strs(&["s-23", "-5", "s-6", "-4"]).unwrap());
    let steps = f4.walk(&f4_lambda(), &[1, 2]).unwrap();
    assert_eq!(steps[1].parameter, aff("s-2"));
    assert_eq!(steps[1].character, char_from_strs(&["s-23", "-5", "-4", "s-6"]).unwrap());
}

#[test]
fn f4_walk_against_transcribed_table() {
    let f4 = RootModel::f4();
    let steps = f4.walk(&f4_lambda(), &parse_word(F4_W0).unwrap()).unwrap();
    let reference = parse_transcript(&golden("f4_w0.txt")).unwrap();
    assert_eq!(reference.len(), 15);
    let diffs = diff_walk(&steps, &reference);
    // the only disagreement is the eighth parameter: α₂·(−13,−4,s−15,14−s)
    assert_eq!(diffs.len(), 1, "{diffs:?}");
    assert_eq!(diffs[0].step, 8);
    assert_eq!(diffs[0].field, "parameter");
    assert_eq!(diffs[0].expected, "2s-19");
    assert_eq!(diffs[0].computed, "2s-29");
    let mu_prime = char_from_strs(&["-13", "-4", "s-15", "14-s"]).unwrap();
    assert_eq!(f4.pairing(&mu_prime, 2).unwrap(), aff("2s-29"));
    let want = ["s-1", "s-2", "s-6", "s-10", "s-11", "s-10", "s-14", "2s-29", "s-15", "s-19", "s-18", "s-19", "s-23", "s-27", "s-28"];
    for (st, w) in steps.iter().zip(want) {
        assert_eq!(st.parameter, aff(w));
    }
}

#[test]
fn f4_endpoint_is_lambda_29_minus_s() {
    let f4 = RootModel::f4();
    let steps = f4.walk(&f4_lambda(), &parse_word(F4_W0).unwrap()).unwrap();
    assert_eq!(steps.last().unwrap().character, reflect_s(&f4_lambda(), &qi(29)));
}

#[test]
fn transcript_roundtrip() {
    let f4 = RootModel::f4();
    let steps = f4.walk(&f4_lambda(), &parse_word(F4_W0).unwrap()).unwrap();
    assert_eq!(parse_transcript(&transcript(&steps)).unwrap(), steps);
}

#[test]
fn rank2_walk() {
    let m = RootModel::rank2();
    let steps = m.walk(&rank2_lambda(), &[1, 2, 1]).unwrap();
    assert!(diff_walk(&steps, &parse_transcript(&golden("rank2.txt")).unwrap()).is_empty());
    assert_eq!(steps[2].character, reflect_s(&rank2_lambda(), &qi(10)));
}

#[test]
fn b3_walk_and_delta() {
    let m = RootModel::b3();
    let (lam, delta) = b3_lambda(8);
    assert_eq!(delta, vec![qi(12), qi(10), qi(8)]);
    assert_eq!(lam, char_from_strs(&["s-6", "-5", "-4"]).unwrap());
    let steps = m.walk(&lam, &[1, 2, 3, 2, 1]).unwrap();
    assert!(diff_walk(&steps, &parse_transcript(&golden("b3_m8.txt")).unwrap()).is_empty());
    // general m: endpoint ((4+m)/2 − s, −(2+m)/2, −m/2)
    for mm in [2i64, 4, 6, 10] {
        let (lam, _) = b3_lambda(mm);
        let end = m.walk(&lam, &[1, 2, 3, 2, 1]).unwrap().pop().unwrap().character;
        assert_eq!(
            end,
            vec![Affine::new(qi(-1), q(4 + mm, 2)), Affine::constant(q(-(2 + mm), 2)), Affine::constant(q(-mm, 2))]
        );
    }
}

#[test]
fn empty_word() {
    assert!(RootModel::f4().walk(&f4_lambda(), &[]).unwrap().is_empty());
}

#[test]
fn bad_index_and_dimension() {
    let f4 = RootModel::f4();
    assert!(f4.reflect(&f4_lambda(), 5).is_err());
    assert!(f4.reflect(&f4_lambda(), 0).is_err());
    assert!(f4.reflect(&rank2_lambda(), 1).is_err());
}

#[test]
fn simple_root_coordinates() {
    let f4 = RootModel::f4();
    let c = f4.to_simple_root_coords(&f4_lambda()).unwrap();
    assert_eq!(c, vec![aff("2s-29"), aff("3s-57"), aff("4s-84"), aff("2s-46")]);
    let l1 = f4.reflect(&f4_lambda(), 1).unwrap();
    let c1 = f4.to_simple_root_coords(&l1).unwrap();
    assert_eq!(c1[0], aff("s-28"));
    assert_eq!(&c1[1..], &c[1..]);
    let zero = vec![Affine::int(0, 0); 4];
    assert!(f4.to_simple_root_coords(&zero).unwrap().iter().all(Affine::is_zero));
}

#[test]
fn jacquet_criterion() {
    let f4 = RootModel::f4();
    let l1 = f4.reflect(&f4_lambda(), 1).unwrap();
    let pair = vec![f4_lambda(), l1.clone()];
    assert!(f4.jacquet_all_negative(&pair, &qi(9)).unwrap());
    assert!(!f4.jacquet_all_negative(&pair, &qi(20)).unwrap());
    assert!(f4.jacquet_all_negative(&[], &qi(20)).unwrap());
    let at9: Vec<Q> = f4.to_simple_root_coords(&l1).unwrap().iter().map(|a| a.eval(&qi(9))).collect();
    assert_eq!(at9, vec![qi(-19), qi(-30), qi(-48), qi(-28)]);
}

#[test]
fn orthogonal_vector_is_fixed() {
    let f4 = RootModel::f4();
    // (1,1,1,1)·α₁ = 0
    let v = char_from_strs(&["s", "s", "s", "s"]).unwrap();
    assert_eq!(f4.reflect(&v, 1).unwrap(), v);
}

fn affine() -> impl Strategy<Value = Affine> {
    (-6i64..6, -40i64..40, 1i64..4).prop_map(|(a, b, d)| Affine::frac(a, b, d))
}

fn model() -> impl Strategy<Value = RootModel> {
    prop_oneof![Just(RootModel::f4()), Just(RootModel::rank2()), Just(RootModel::b3())]
}

proptest! {
    #[test]
    fn double_reflection_is_identity(m in model(), l in prop::collection::vec(affine(), 4), j in 1usize..5) {
        let l = &l[..m.dim];
        let j = 1 + (j - 1) % m.simple.len();
        let r = m.reflect(l, j).unwrap();
        prop_assert_eq!(m.reflect(&r, j).unwrap(), l.to_vec());
    }

    #[test]
    fn reversed_word_returns(l in prop::collection::vec(affine(), 4), word in prop::collection::vec(1usize..5, 0..16)) {
        let f4 = RootModel::f4();
        let fwd = f4.walk(&l, &word).unwrap();
        let end = fwd.last().map(|s| s.character.clone()).unwrap_or_else(|| l.clone());
        let rev: Vec<usize> = word.iter().rev().copied().collect();
        let back = f4.walk(&end, &rev).unwrap();
        let start = back.last().map(|s| s.character.clone()).unwrap_or(end);
        prop_assert_eq!(start, l);
    }

    #[test]
    fn parameters_match_recomputation(l in prop::collection::vec(affine(), 4), word in prop::collection::vec(1usize..5, 1..16)) {
        let f4 = RootModel::f4();
        let steps = f4.walk(&l, &word).unwrap();
        let mut prev = l.clone();
        for st in &steps {
            prop_assert_eq!(&st.parameter, &f4.pairing(&prev, st.index).unwrap());
            prev = st.character.clone();
        }
    }

    #[test]
    fn coordinates_expand_back(m in model(), l in prop::collection::vec(affine(), 4)) {
        let l = &l[..m.dim];
        let c = m.to_simple_root_coords(l).unwrap();
        for i in 0..m.dim {
            let mut acc = Affine::int(0, 0);
            for (k, ck) in c.iter().enumerate() {
                acc = acc.add(&ck.scale(&m.simple[k][i]));
            }
            prop_assert_eq!(&acc, &l[i]);
        }
    }

    #[test]
    fn display_parse_roundtrip(a in affine()) {
        prop_assert_eq!(a.to_string().parse::<Affine>().unwrap(), a);
    }
}

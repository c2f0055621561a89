//! Every serialized object re-parses to an equal canonical object, and the
//! wire formats stay fixed.

use fullgroup::census::{census, CensusEntry, TransitiveTupleType};
use fullgroup::conjugate::{conjugate_tuples, ConjugationResult};
use fullgroup::cylinder::CylinderSet;
use fullgroup::densify::{densify, DensifyResult};
use fullgroup::equidecompose::{equidecompose_onto, prec, EquidecompResult, PrecResult};
use fullgroup::l0::{phi_embed, StepFn};
use fullgroup::perm::Perm;
use fullgroup::rational::{ratio, Lambda};
use fullgroup::table::{odometer, LeafPerm, TableMap, TruncatedMap};
use fullgroup::word::{w, Word};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(value: &T) -> String {
    let json = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&json).unwrap();
    assert_eq!(&back, value, "{json}");
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
    json
}

fn lam() -> Lambda {
    Lambda::from_ratio(2, 3).unwrap()
}

#[test]
fn words_sets_and_rationals() {
    assert_eq!(round_trip(&w("0110")), r#""0110""#);
    assert_eq!(round_trip(&Word::root()), r#""""#);
    let s = CylinderSet::parse(&["11", "0", "10"]).unwrap();
    assert_eq!(round_trip(&s), r#"[""]"#);
    let s = CylinderSet::parse(&["11", "01"]).unwrap();
    assert_eq!(round_trip(&s), r#"["01","11"]"#);
    assert_eq!(round_trip(&lam()), r#""2/3""#);
    assert!(serde_json::from_str::<Lambda>(r#""3/2""#).is_err());
}

#[test]
fn tables_and_permutations() {
    let t = TableMap::parse(&[("1", "0"), ("0", "1")]).unwrap();
    assert_eq!(round_trip(&t), r#"{"pairs":[["0","1"],["1","0"]]}"#);
    // Non-canonical input is merged on the way in.
    let split: TableMap = serde_json::from_str(r#"{"pairs":[["00","00"],["01","01"],["1","1"]]}"#).unwrap();
    assert_eq!(split, TableMap::identity());
    assert!(serde_json::from_str::<TableMap>(r#"{"pairs":[["0","10"]]}"#).is_err());
    assert_eq!(round_trip(&Perm::from_images(vec![2, 0, 1]).unwrap()), "[2,0,1]");
    assert!(serde_json::from_str::<Perm>("[0,0]").is_err());
    let p = LeafPerm::successor(2);
    assert_eq!(round_trip(&p), r#"{"level":2,"perm":[1,2,3,0]}"#);
}

#[test]
fn odometer_cut() {
    let o: TruncatedMap = odometer(2).unwrap();
    assert_eq!(
        round_trip(&o),
        r#"{"pairs":[["0","1"],["10","01"]],"defect_dom":["11"],"defect_rng":["00"]}"#
    );
}

#[test]
fn step_functions() {
    let f = phi_embed(&LeafPerm::successor(1)).unwrap();
    assert_eq!(round_trip(&f), r#"{"group":"S_2","pieces":[["",[1,0]]]}"#);
    let g = StepFn::from_pieces(vec![(w("0"), 3usize), (w("1"), 1)]).unwrap();
    assert_eq!(round_trip(&g), r#"{"pieces":[["0",3],["1",1]]}"#);
    assert!(serde_json::from_str::<StepFn<usize>>(r#"{"pieces":[["0",3]]}"#).is_err());
}

#[test]
fn census_entries() {
    let swap = LeafPerm::new(1, Perm::from_images(vec![1, 0]).unwrap()).unwrap();
    let c = census(&[swap.refine(2).unwrap()], &lam()).unwrap();
    let json = serde_json::to_string(&c).unwrap();
    assert_eq!(json, r#"[{"type":"2:1,0","count":2,"mass":"1/1","blocks":[[0,2],[1,3]]}]"#);
    let entries: Vec<CensusEntry> = serde_json::from_str(&json).unwrap();
    assert_eq!(entries, c.entries);
    assert_eq!(round_trip(&TransitiveTupleType::parse("3:1,2,0|0,2,1").unwrap()), r#""3:1,2,0|0,2,1""#);
    assert!(serde_json::from_str::<TransitiveTupleType>(r#""2:0,1""#).is_err());
}

#[test]
fn operation_results() {
    let a = CylinderSet::parse(&["0"]).unwrap();
    let b = CylinderSet::parse(&["10"]).unwrap();
    let r: EquidecompResult = equidecompose_onto(&a, &b, &lam(), &ratio(1, 8)).unwrap();
    round_trip(&r);
    let p: PrecResult = prec(&b, &a).unwrap();
    round_trip(&p);

    let s = [LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1]]).unwrap()).unwrap()];
    let t = [LeafPerm::new(3, Perm::from_cycles(8, &[&[0, 1], &[2, 3]]).unwrap()).unwrap()];
    let c: ConjugationResult = conjugate_tuples(&s, &t, &lam(), &ratio(1, 4)).unwrap();
    round_trip(&c);

    let d: DensifyResult = densify(&[LeafPerm::identity(1)], &lam(), &ratio(1, 4), 2, 1).unwrap();
    round_trip(&d);
}

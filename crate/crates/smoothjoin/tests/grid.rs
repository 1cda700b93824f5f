use std::path::Path;

use proptest::prelude::*;
use smoothjoin::grid::{Adjacencies, AdjacencySpec, Auto, GridFile, PatchSpec};
use smoothjoin::json::Q;
use smoothjoin_core::ratio;

fn load(name: &str) -> GridFile {
    GridFile::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("grids").join(name)).unwrap()
}

#[test]
fn bundled_grids_round_trip() {
    for name in ["square_triangle.json", "parallelogram_strip.json", "sheared_pair.json", "single.json", "squares.json", "smoke4d.json"] {
        let g = load(name);
        let again: GridFile = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(g, again, "{name}");
        assert!(g.patches().is_ok(), "{name}");
    }
}

#[test]
fn rationals_accept_strings_and_integers() {
    let q: Vec<Q> = serde_json::from_str(r#"["3/6", -2, " 4 ", "-1/3", 0]"#).unwrap();
    let got: Vec<_> = q.into_iter().map(|q| q.0).collect();
    assert_eq!(got, vec![ratio(1, 2), ratio(-2, 1), ratio(4, 1), ratio(-1, 3), ratio(0, 1)]);
    assert!(serde_json::from_str::<Q>(r#""1/0""#).is_err());
    assert!(serde_json::from_str::<Q>(r#""0.5""#).is_err());
    assert_eq!(serde_json::to_string(&Q(ratio(6, -4))).unwrap(), r#""-3/2""#);
}

#[test]
fn auto_and_listed_adjacencies() {
    let g = load("squares.json");
    assert_eq!(g.adjacencies, Adjacencies::Auto(Auto::Auto));
    let patches = g.patches().unwrap();
    assert_eq!(g.adjacency_indices(&patches).unwrap(), vec![(0, 1), (1, 2)]);
    let listed = GridFile {
        adjacencies: Adjacencies::List(vec![AdjacencySpec { left: "c".into(), right: "b".into() }]),
        ..g
    };
    assert_eq!(listed.adjacency_indices(&patches).unwrap(), vec![(2, 1)]);
}

fn q() -> impl Strategy<Value = Q> {
    (-20i64..20, 1i64..7).prop_map(|(n, d)| Q(ratio(n, d)))
}

proptest! {
    #[test]
    fn random_grids_round_trip(
        bases in proptest::collection::vec(proptest::collection::vec(q(), 2), 1..4),
        degrees in proptest::collection::vec(0u32..5, 2),
        order in 0u32..3,
        auto in any::<bool>(),
    ) {
        let patches: Vec<PatchSpec> = bases
            .into_iter()
            .enumerate()
            .map(|(i, base)| PatchSpec {
                id: format!("p{i}"),
                base,
                blocks: vec![vec![vec![Q(ratio(1, 1)), Q(ratio(0, 1))]], vec![vec![Q(ratio(0, 1)), Q(ratio(1, 2))]]],
                degrees: degrees.clone(),
            })
            .collect();
        let adjacencies = if auto {
            Adjacencies::Auto(Auto::Auto)
        } else {
            Adjacencies::List(vec![AdjacencySpec { left: "p0".into(), right: "p0".into() }])
        };
        let g = GridFile { patches, adjacencies, order };
        let again: GridFile = serde_json::from_str(&g.to_json()).unwrap();
        prop_assert_eq!(g, again);
    }
}

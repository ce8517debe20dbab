use std::collections::BTreeMap;
use std::sync::Arc;

use catml::category::Budget;
use catml::foundations::{equiv_refines, DiGraph, EquivRelation, GraphHom};
use catml::mlsys::{
    check_transformation, induced_quotient_map, order_map, quotient_system, MLSystem, TransMap, Transformation,
    Uniqueness,
};

fn labeled(blocks: &[(&str, &[&str])]) -> EquivRelation {
    EquivRelation::labeled(blocks.iter().map(|(l, b)| (l.to_string(), b.iter().map(|s| s.to_string()).collect())).collect())
        .unwrap()
}

/// Element maps `dom -> cod` (as index tables) satisfying `ok`.
fn count_maps(dom: &[String], cod: &[String], ok: impl Fn(&BTreeMap<String, String>) -> bool) -> usize {
    let (n, k) = (dom.len(), cod.len());
    (0..k.pow(n as u32))
        .filter(|code| {
            let mut c = *code;
            let m = dom
                .iter()
                .map(|x| {
                    let y = cod[c % k].clone();
                    c /= k;
                    (x.clone(), y)
                })
                .collect();
            ok(&m)
        })
        .count()
}

#[test]
fn months_refine_quarters() {
    let months = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"];
    let dates: Vec<String> = months.iter().map(|m| format!("15-{m}")).collect();
    let monthly = EquivRelation::by_key(&dates, |d| d.to_string());
    let quarterly = EquivRelation::by_key(&dates, |d| months.iter().position(|m| d.ends_with(m)).unwrap() / 3);
    assert!(equiv_refines(&monthly, &quarterly).unwrap());
    assert!(!equiv_refines(&quarterly, &monthly).unwrap());

    let crossing = |a: [&str; 2], b: [&str; 2]| {
        EquivRelation::from_blocks(vec![a.map(String::from).to_vec(), b.map(String::from).to_vec()]).unwrap()
    };
    let (x, y) = (crossing(["1", "2"], ["3", "4"]), crossing(["1", "3"], ["2", "4"]));
    assert!(!equiv_refines(&x, &y).unwrap());
    assert!(equiv_refines(&EquivRelation::discrete(&["1", "2", "3", "4"]), &y).unwrap());
}

#[test]
fn monthly_to_quarterly_block_map() {
    // four transactions in time order
    let g = DiGraph::from_parts(
        &["t1", "t2", "t3", "t4"],
        &[("t1<t2", "t1", "t2"), ("t2<t3", "t2", "t3"), ("t3<t4", "t3", "t4")],
    )
    .unwrap();
    let s = Arc::new(MLSystem::relation(g));
    let monthly = labeled(&[("Jan", &["t1", "t2"]), ("Feb", &["t3"]), ("Apr", &["t4"])]);
    let quarterly = labeled(&[("Q1", &["t1", "t2", "t3"]), ("Q2", &["t4"])]);
    let om = order_map(&s, &monthly, &quarterly, Budget::default()).unwrap();
    assert!(om.passed(), "{:?}", om.report);
    let m = om.map.element_map();
    assert_eq!((m["Jan"].as_str(), m["Feb"].as_str(), m["Apr"].as_str()), ("Q1", "Q1", "Q2"));
    assert!(matches!(om.uniqueness, Uniqueness::Verified { candidates: 8 }));

    // every block map that commutes with the quotients
    let blocks: Vec<String> = ["Jan", "Feb", "Apr"].map(String::from).to_vec();
    let quarters: Vec<String> = ["Q1", "Q2"].map(String::from).to_vec();
    let qm = quotient_system(&s, &monthly).unwrap().q.element_map();
    let qq = quotient_system(&s, &quarterly).unwrap().q.element_map();
    assert_eq!(count_maps(&blocks, &quarters, |v| qm.iter().all(|(x, b)| v[b] == qq[x])), 1);
}

#[test]
fn provenance_zoom() {
    // records derived from one another, binned by source table
    let g = DiGraph::from_parts(
        &["r1", "r2", "r3", "r4", "r5", "r6"],
        &[("d1", "r1", "r4"), ("d2", "r2", "r5"), ("d3", "r3", "r6"), ("d4", "r1", "r2"), ("d5", "r4", "r5")],
    )
    .unwrap();
    let s = Arc::new(MLSystem::relation(g));
    let tables = labeled(&[("raw", &["r1", "r2", "r3"]), ("clean", &["r4", "r5", "r6"])]);
    let q = quotient_system(&s, &tables).unwrap();
    let zoomed = q.system.graph().unwrap();
    assert_eq!(zoomed.nodes().len(), 2);
    let pairs: Vec<(&str, &str)> = zoomed.edges().iter().map(|e| (e.src.as_str(), e.dst.as_str())).collect();
    assert_eq!(pairs.len(), 3);
    for p in [("raw", "clean"), ("raw", "raw"), ("clean", "clean")] {
        assert!(pairs.contains(&p), "{pairs:?}");
    }
    assert!(check_transformation(&q.q).unwrap().passed());
    assert!(q.q.is_surjective());

    // zoom back in: the records behind the raw -> clean edge
    let TransMap::Graph(h) = &q.q.map else { panic!("relation quotient is a graph map") };
    let cross = zoomed.edges().iter().find(|e| e.src == "raw" && e.dst == "clean").unwrap();
    let behind: Vec<&String> = h.edges.iter().filter(|(_, c)| **c == cross.id).map(|(e, _)| e).collect();
    assert_eq!(behind, ["d1", "d2", "d3"]);
}

fn fruit_graph() -> DiGraph {
    let fruits = ["GalaApple", "Honeycrisp", "SmithApple", "Plantain", "RedBanana"];
    let mut nodes = vec!["I", "love"];
    nodes.extend(fruits);
    let ids: Vec<String> = fruits.iter().map(|f| format!("(love,{f})")).collect();
    let mut edges = vec![("(I,love)", "I", "love")];
    edges.extend(fruits.iter().zip(&ids).map(|(f, id)| (id.as_str(), "love", *f)));
    DiGraph::from_parts(&nodes, &edges).unwrap()
}

#[test]
fn fruit_kinds_to_store_sections() {
    let s = Arc::new(MLSystem::relation(fruit_graph()));
    let store = DiGraph::from_parts(
        &["shopper", "visits", "appleBin", "bananaBin"],
        &[("enter", "shopper", "visits"), ("toApples", "visits", "appleBin"), ("toBananas", "visits", "bananaBin")],
    )
    .unwrap();
    let u = Arc::new(MLSystem::relation(store));
    let bin = |f: &str| if f.ends_with("Apple") || f == "Honeycrisp" { "appleBin" } else { "bananaBin" };
    let mut nodes: BTreeMap<String, String> = [("I", "shopper"), ("love", "visits")]
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .into_iter()
        .collect();
    let mut edges = BTreeMap::from([("(I,love)".to_string(), "enter".to_string())]);
    for f in ["GalaApple", "Honeycrisp", "SmithApple", "Plantain", "RedBanana"] {
        nodes.insert(f.into(), bin(f).into());
        edges.insert(format!("(love,{f})"), if bin(f) == "appleBin" { "toApples" } else { "toBananas" }.into());
    }
    let t = Transformation { source: s.clone(), target: u.clone(), map: TransMap::Graph(GraphHom { nodes, edges }) };
    assert!(check_transformation(&t).unwrap().passed());

    let kinds = labeled(&[
        ("I", &["I"]),
        ("love", &["love"]),
        ("apples", &["GalaApple", "Honeycrisp", "SmithApple"]),
        ("bananas", &["Plantain", "RedBanana"]),
    ]);
    let sections = labeled(&[("shopper", &["shopper"]), ("visits", &["visits"]), ("produce", &["appleBin", "bananaBin"])]);
    let ind = induced_quotient_map(&t, &kinds, &sections, Budget::default()).unwrap();
    assert!(ind.passed(), "{:?}", ind.report);
    // seven elements: above desk scale, unique by surjectivity of Q
    assert_eq!(ind.uniqueness, Uniqueness::ByConstruction);

    // every square, element by element and edge by edge
    let (qs, qu) = (quotient_system(&s, &kinds).unwrap().q, quotient_system(&u, &sections).unwrap().q);
    let left = qs.then(&ind.map).unwrap();
    let right = t.then(&qu).unwrap();
    assert!(left.agrees_with(&right));
    for x in s.carrier() {
        assert_eq!(left.element(x), right.element(x), "{x}");
    }
    let tm = ind.map.element_map();
    assert_eq!(tm["apples"], "produce");
    assert_eq!(tm["bananas"], "produce");

    // an exhaustive count over the 81 class maps agrees
    let around = right.element_map();
    let qm = qs.element_map();
    let classes = qs.target.carrier().to_vec();
    let sect = qu.target.carrier().to_vec();
    let n = count_maps(&classes, &sect, |v| {
        qm.iter().all(|(x, c)| v[c] == around[x])
            && qs.target.graph().unwrap().edges().iter().all(|e| qu.target.related(&v[&e.src], &v[&e.dst]))
    });
    assert_eq!(n, 1);
}

#[test]
fn surjective_t_gives_surjective_t_star() {
    let g = DiGraph::from_parts(&["a", "b", "c", "d"], &[("ab", "a", "b"), ("cd", "c", "d")]).unwrap();
    let h = DiGraph::from_parts(&["x", "y"], &[("xy", "x", "y")]).unwrap();
    let (s, u) = (Arc::new(MLSystem::relation(g)), Arc::new(MLSystem::relation(h)));
    let hom = GraphHom {
        nodes: [("a", "x"), ("b", "y"), ("c", "x"), ("d", "y")].map(|(a, b)| (a.to_string(), b.to_string())).into(),
        edges: [("ab", "xy"), ("cd", "xy")].map(|(a, b)| (a.to_string(), b.to_string())).into(),
    };
    let t = Transformation { source: s.clone(), target: u.clone(), map: TransMap::Graph(hom) };
    assert!(t.is_surjective());
    let rho = labeled(&[("ac", &["a", "c"]), ("b", &["b"]), ("d", &["d"])]);
    let ind = induced_quotient_map(&t, &rho, &EquivRelation::discrete(u.carrier()), Budget::default()).unwrap();
    assert!(ind.passed(), "{:?}", ind.report);
    assert!(ind.map.is_surjective());
    let image: std::collections::BTreeSet<String> = ind.map.element_map().into_values().collect();
    assert_eq!(image.len(), 2);
    assert!(matches!(ind.uniqueness, Uniqueness::Verified { .. }));

    // T(ρ) ⊄ σ is refused
    let split = labeled(&[("ab", &["a", "b"]), ("c", &["c"]), ("d", &["d"])]);
    assert!(induced_quotient_map(&t, &split, &EquivRelation::discrete(u.carrier()), Budget::default()).is_err());
}

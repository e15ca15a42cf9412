use super::*;

fn s3() -> FinGroupoid {
    GroupoidSpec::Symmetric(3).build().unwrap()
}

#[test]
fn cyclic_one_is_trivial() {
    let g = GroupoidSpec::Cyclic(1).build().unwrap();
    assert_eq!((g.n_obj(), g.n_mor()), (1, 1));
}

#[test]
fn symmetric_three_matches_permutation_oracle() {
    let g = s3();
    assert_eq!((g.n_obj(), g.n_mor()), (1, 6));
    // Independent oracle: compose permutations as arrays.
    let perms = builders::permutations(3);
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            let pq: Vec<usize> = (0..3).map(|k| p[q[k]]).collect();
            assert_eq!(perms[g.compose(i, j)], pq);
        }
        assert_eq!(g.compose(i, g.inv(i)), g.idn(0));
        assert_eq!(g.compose(g.inv(i), i), g.idn(0));
    }
}

#[test]
fn non_associative_table_names_triple() {
    // Three-element "group" {0, 1, 2} with 1·1 = 2, 2·2 = 1, 1·2 = 2·1 = 0,
    // except 2·1 = 2 breaks associativity.
    let mul = [[0, 1, 2], [1, 2, 0], [2, 2, 1]];
    let entries: Vec<_> = (0..3)
        .flat_map(|g| (0..3).map(move |f| (g, f, mul[g][f])))
        .collect();
    let err = FinCat::from_table(1, vec![0; 3], vec![0; 3], &entries).unwrap_err();
    assert!(matches!(err, Error::NotAssociative { .. }), "{err}");
}

#[test]
fn missing_identity_is_reported() {
    let err = FinCat::from_table(1, vec![0, 0], vec![0, 0], &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap_err();
    assert!(matches!(err, Error::InvalidCategory(_)));
}

#[test]
fn derived_categories() {
    let g = s3();
    assert_eq!(g.opposite().opposite(), g);
    let p = g.product(&g);
    assert_eq!((p.n_obj(), p.n_mor()), (1, 36));
    let c2 = GroupoidSpec::Cyclic(2).build().unwrap();
    let cp = c2.coproduct(&c2);
    assert_eq!((cp.n_obj(), cp.n_mor()), (2, 4));
    assert!(cp.hom(0, 1).is_empty() && cp.hom(1, 0).is_empty());
    assert!(axioms_hold(&p) && axioms_hold(&cp));
}

#[test]
fn builders_have_expected_orders() {
    for (spec, n) in [
        (GroupoidSpec::Dihedral(4), 8),
        (GroupoidSpec::Klein, 4),
        (GroupoidSpec::Cyclic(5), 5),
        (GroupoidSpec::DisjointGroups(vec![GroupTable::cyclic(2), GroupTable::cyclic(3)]), 5),
    ] {
        assert_eq!(spec.build().unwrap().n_mor(), n);
    }
    // C2 acting on two points by swapping: connected, two objects, four morphisms.
    let act = GroupoidSpec::Action { group: GroupTable::cyclic(2), act: vec![vec![0, 1], vec![1, 0]] };
    let a = act.build().unwrap();
    assert_eq!((a.n_obj(), a.n_mor()), (2, 4));
    assert_eq!(a.hom(0, 1).len(), 1);
}

fn codiscrete(n: usize) -> FinGroupoid {
    let src: Vec<usize> = (0..n * n).map(|i| i / n).collect();
    let tgt: Vec<usize> = (0..n * n).map(|i| i % n).collect();
    let mut comp = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                comp.push((b * n + c, a * n + b, a * n + c));
            }
        }
    }
    GroupoidSpec::Table { n_obj: n, src, tgt, comp }.build().unwrap()
}

#[test]
fn equivalence_examples() {
    let g = s3();
    let w = check_equivalence(g.cat(), g.cat());
    assert!(w.witness().unwrap().verify());

    let triv = GroupoidSpec::Cyclic(1).build().unwrap();
    let cod = codiscrete(2);
    let w = check_equivalence(cod.cat(), triv.cat());
    assert!(w.witness().unwrap().verify());

    let c2 = GroupoidSpec::Cyclic(2).build().unwrap();
    match check_equivalence(c2.cat(), triv.cat()) {
        Equivalence::Distinct(why) => assert!(why.contains("[2] vs [1]"), "{why}"),
        Equivalence::Witness(_) => panic!("C2 is not equivalent to the trivial group"),
    }
}

#[test]
fn equivalence_is_an_equivalence_relation_on_builders() {
    let cats: Vec<Arc<FinCat>> = vec![
        GroupoidSpec::Cyclic(4).build().unwrap().cat().clone(),
        GroupoidSpec::Klein.build().unwrap().cat().clone(),
        GroupoidSpec::Action { group: GroupTable::cyclic(4), act: vec![vec![0], vec![0], vec![0], vec![0]] }
            .build()
            .unwrap()
            .cat()
            .clone(),
        GroupoidSpec::Action {
            group: GroupTable::cyclic(2),
            act: vec![vec![0, 1], vec![1, 0]],
        }
        .build()
        .unwrap()
        .cat()
        .clone(),
        GroupoidSpec::Cyclic(1).build().unwrap().cat().clone(),
        Arc::new(codiscrete(3).cat().as_ref().clone()),
    ];
    let eq = |a: &Arc<FinCat>, b: &Arc<FinCat>| check_equivalence(a, b).is_equivalent();
    for a in &cats {
        assert!(eq(a, a));
        for b in &cats {
            assert_eq!(eq(a, b), eq(b, a));
            for c in &cats {
                if eq(a, b) && eq(b, c) {
                    assert!(eq(a, c));
                }
            }
            if eq(a, b) {
                let (ao, bo) = (Arc::new(a.opposite()), Arc::new(b.opposite()));
                assert!(eq(&ao, &bo));
                let e = GroupoidSpec::Cyclic(2).build().unwrap();
                assert!(eq(&Arc::new(a.product(e.cat())), &Arc::new(b.product(e.cat()))));
            }
        }
    }
    // C4 and the action groupoid of C4 on a point are the same thing; C4 and
    // the Klein group are not.
    assert!(eq(&cats[0], &cats[2]));
    assert!(!eq(&cats[0], &cats[1]));
    assert!(eq(&cats[3], &cats[4]));
}

#[test]
fn empty_category_is_legal() {
    let e = Arc::new(FinCat::empty());
    assert!(check_equivalence(&e, &e).is_equivalent());
    assert_eq!(e.product(&FinCat::terminal()).n_obj(), 0);
}

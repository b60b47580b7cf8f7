use liesoliton::catalog;
use liesoliton::specfile::AlgebraSpecFile;
use liesoliton::{Error, Tolerances};
use proptest::prelude::*;

#[test]
fn catalog_round_trips_through_files() {
    let tol = Tolerances::default();
    for entry in catalog::catalog() {
        let file = AlgebraSpecFile::from_metric_lie_algebra(&entry.name, &entry.algebra);
        let text = file.write();
        let back = AlgebraSpecFile::parse(&text).unwrap();
        assert_eq!(back.write(), text);
        let mla = back.to_metric_lie_algebra(&tol).unwrap();
        assert_eq!(mla.alg().tensor(), entry.algebra.alg().tensor(), "{}", entry.name);
        assert_eq!(mla.metric(), entry.algebra.metric());
    }
}

#[test]
fn malformed_files_are_rejected() {
    let bad = [
        "name x\ndim 2\nbracket 1 2 3 1\n",
        "name x\ndim 2\nbracket 1 1 2 1\n",
        "name x\ndim two\n",
        "name x\ndim 2\nbracket 1 2 1 1\nbracket 1 2 1 2\n",
    ];
    for text in bad {
        let err = AlgebraSpecFile::parse(text).unwrap_err();
        assert!(
            matches!(err, Error::Parse { .. } | Error::Inconsistent(_) | Error::Dimension(_)),
            "{text}: {err:?}"
        );
    }
}

proptest! {
    #[test]
    fn random_metrics_round_trip(vals in proptest::collection::vec(-0.3f64..0.3, 6), diag in proptest::collection::vec(1.0f64..3.0, 3)) {
        let mut g = liesoliton::Matrix::zeros(3, 3);
        let mut k = 0;
        for i in 0..3 {
            g[(i, i)] = diag[i];
            for j in (i + 1)..3 {
                g[(i, j)] = vals[k];
                g[(j, i)] = vals[k];
                k += 1;
            }
        }
        let m = catalog::heis3().with_metric(g.clone()).unwrap();
        let text = AlgebraSpecFile::from_metric_lie_algebra("heis3", &m).write();
        let back = AlgebraSpecFile::parse(&text).unwrap().to_metric_lie_algebra(&Tolerances::default()).unwrap();
        prop_assert_eq!(back.metric(), &g);
    }

    #[test]
    fn random_brackets_canonicalize(c in -5.0f64..5.0) {
        // [e2, e1] = c e3 written reversed must read back as [e1, e2] = -c e3.
        let text = format!("name t\ndim 3\nbracket 2 1 3 {c}\n");
        let f = AlgebraSpecFile::parse(&text).unwrap();
        if c != 0.0 {
            prop_assert_eq!(f.brackets.clone(), vec![(0, 1, 2, -c)]);
        }
        let again = AlgebraSpecFile::parse(&f.write()).unwrap();
        prop_assert_eq!(again.write(), f.write());
    }
}

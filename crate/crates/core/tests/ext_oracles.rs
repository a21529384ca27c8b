use localp2::homalg::{
    dims_i64, euler_form_y, ext_dims_p2, ext_dims_y, verify_cy3_duality, verify_pushforward_triangle,
};
use localp2::rep::{direct_sum, p2_restrict, point_module, pushforward_module, simple_module};
use localp2::scalar::{rat, ratio};
use localp2::{QuiverModule, Rational, Representation, ScalarMode};

const R: ScalarMode = ScalarMode::Rational;
const P: u64 = 2147483659;

fn pt(x: [i64; 3], t: Rational) -> Representation {
    point_module(x.map(rat), t, 0).unwrap()
}

fn ext(m: &Representation, n: &Representation) -> Vec<usize> {
    ext_dims_y(m, n, R).unwrap().dims
}

fn zoo() -> Vec<(&'static str, Representation)> {
    vec![
        ("origin", pt([1, 0, 0], rat(0))),
        ("generic", pt([1, 2, 3], ratio(1, 2))),
        ("S0", simple_module(0, 0).unwrap()),
        ("S1", simple_module(1, 0).unwrap()),
        ("S2", simple_module(2, 0).unwrap()),
        ("O1", pushforward_module(1, 0).unwrap()),
        ("O2", pushforward_module(2, 0).unwrap()),
    ]
}

#[test]
fn frozen_table() {
    let z = zoo();
    let get = |name: &str| z.iter().find(|(n, _)| *n == name).unwrap().1.clone();
    let cases: &[(&str, &str, [usize; 4])] = &[
        ("origin", "origin", [1, 3, 3, 1]),
        ("generic", "generic", [1, 3, 3, 1]),
        ("origin", "generic", [0, 0, 0, 0]),
        ("S0", "S0", [1, 0, 0, 1]),
        ("O1", "O1", [1, 0, 0, 1]),
        ("O2", "O2", [1, 0, 0, 1]),
        ("S0", "O1", [3, 0, 0, 0]),
        ("O1", "S0", [0, 0, 0, 3]),
        ("S0", "O2", [6, 0, 0, 0]),
        ("O1", "O2", [3, 0, 0, 0]),
        ("S0", "S1", [0, 0, 3, 0]),
        ("S1", "S0", [0, 3, 0, 0]),
        ("S0", "S2", [0, 3, 0, 0]),
        ("S0", "origin", [1, 1, 0, 0]),
        ("origin", "S0", [0, 0, 1, 1]),
        ("S1", "origin", [0, 2, 2, 0]),
        ("S1", "O1", [0, 8, 0, 1]),
        ("S2", "O2", [0, 0, 10, 1]),
        ("generic", "O1", [0, 0, 0, 0]),
        ("generic", "S1", [0, 0, 0, 0]),
    ];
    for (a, b, want) in cases {
        assert_eq!(ext(&get(a), &get(b)), want.to_vec(), "Ext({a}, {b})");
    }
}

#[test]
fn euler_and_duality_across_zoo() {
    let z = zoo();
    for (a, m) in &z {
        for (b, n) in &z {
            let e = ext_dims_y(m, n, R).unwrap();
            assert_eq!(e.alternating_sum(), euler_form_y(dims_i64(m.dims()), dims_i64(n.dims())), "{a},{b}");
            assert!(verify_cy3_duality(m, n, R).unwrap().ok, "{a},{b}");
            assert_eq!(ext_dims_y(m, n, ScalarMode::Prime(P)).unwrap(), e, "{a},{b}");
        }
    }
}

#[test]
fn p2_side_values() {
    for (name, m) in zoo() {
        let pm = p2_restrict(&m);
        let want = if m.dims() == [1, 1, 1] { vec![1, 2, 1] } else { vec![1, 0, 0] };
        assert_eq!(ext_dims_p2(&pm, &pm, R).unwrap().dims, want, "{name}");
        let tri = verify_pushforward_triangle(&m, R).unwrap();
        assert!(tri.holds, "{name}: {:?}", tri.flagged);
    }
}

#[test]
fn ext_is_additive() {
    let z = zoo();
    let a = &z[0].1;
    let b = &z[5].1;
    let sum = direct_sum(a, b).unwrap();
    let lhs = ext(&sum, &sum);
    let mut rhs = vec![0; 4];
    for x in [a, b] {
        for y in [a, b] {
            for (r, v) in rhs.iter_mut().zip(ext(x, y)) {
                *r += v;
            }
        }
    }
    assert_eq!(lhs, rhs);
}

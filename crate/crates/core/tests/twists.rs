use localp2::homalg::ext_dims_y;
use localp2::oricalc::{koszul_rewrite, ori_char, Direction, DetCharacter};
use localp2::oricalc::{dims_assignment, eval_char};
use localp2::rep::{find_isomorphism, point_module, pushforward_module};
use localp2::scalar::{rat, ratio};
use localp2::windows::{extend_window, twist_down, twist_up, WindowVector};
use localp2::{QuiverModule, Representation, ScalarMode};
use proptest::prelude::*;

fn point(x: [i64; 3], t: (i64, i64), heart: i64) -> Option<Representation> {
    point_module(x.map(rat), ratio(t.0, t.1), heart).ok()
}

#[test]
fn repeated_twists_of_a_point_stay_points() {
    let mut p = point([2, -1, 3], (5, 2), 0).unwrap();
    let start = p.clone();
    for _ in 0..4 {
        p = twist_up(&p).unwrap();
        assert_eq!(p.dims(), [1, 1, 1]);
        assert!(p.check_relations().ok);
    }
    for _ in 0..4 {
        p = twist_down(&p).unwrap();
    }
    assert_eq!(p.heart(), 0);
    assert!(find_isomorphism(&start, &p).unwrap().is_some());
}

#[test]
fn twist_matches_window_extension_and_orientation() {
    for d in 1..4 {
        let m = pushforward_module(d, 0).unwrap();
        let t = twist_up(&m).unwrap();
        let w = extend_window(&WindowVector::from_module(&m), 3).unwrap();
        assert_eq!([1, 2, 3].map(|k| w.get(k).unwrap() as usize), t.dims());

        // The orientation exponent vector of the twisted module equals the
        // rewritten character evaluated on the extended window.
        let full: Vec<i64> = (0..4).map(|k| w.get(k).unwrap()).collect();
        let rewritten: DetCharacter = koszul_rewrite(&ori_char(0), 0, Direction::Up);
        let lhs = eval_char(&rewritten, &dims_assignment(0, 0, &full)).unwrap();
        let dims: Vec<i64> = t.dims().iter().map(|&x| x as i64).collect();
        let rhs = eval_char(&ori_char(1), &dims_assignment(0, 1, &dims)).unwrap();
        assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn point_twists_preserve_ext(
        x in prop::array::uniform3(-3i64..4),
        y in prop::array::uniform3(-3i64..4),
        t in (-4i64..5, 1i64..4),
        s in (-4i64..5, 1i64..4),
    ) {
        let (Some(p), Some(q)) = (point(x, t, 0), point(y, s, 0)) else { return Ok(()) };
        let before = ext_dims_y(&p, &q, ScalarMode::Rational).unwrap();
        let (tp, tq) = (twist_up(&p).unwrap(), twist_up(&q).unwrap());
        prop_assert_eq!(ext_dims_y(&tp, &tq, ScalarMode::Rational).unwrap(), before);
        let back = twist_down(&tp).unwrap();
        prop_assert!(find_isomorphism(&p, &back).unwrap().is_some());
    }
}

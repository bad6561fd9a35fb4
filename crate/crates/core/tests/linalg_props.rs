use momentframe::linalg::{
    complement_within, format_rational, intersect, kernel_basis, parse_rational, project_onto, rank,
    solve_in_image,
};
use momentframe::{Mat, Rational, Scalar, SubspaceBasis};
use proptest::prelude::*;

type Q = Rational;

fn int_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = Mat<Q>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| Mat::from_i64(r, c, &v))
    })
}

/// Products of thin factors give matrices of controlled, usually deficient, rank.
fn low_rank_matrix() -> impl Strategy<Value = Mat<Q>> {
    (1usize..=8, 1usize..=8, 0usize..=4).prop_flat_map(|(r, c, k)| {
        (
            prop::collection::vec(-3i64..=3, r * k),
            prop::collection::vec(-3i64..=3, k * c),
        )
            .prop_map(move |(a, b)| {
                let a = Mat::<Q>::from_i64(r, k, &a);
                let b = Mat::<Q>::from_i64(k, c, &b);
                a.matmul(&b).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_of_transpose(m in int_matrix(7, 7, 4)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn rank_nullity(m in low_rank_matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.dim(), m.cols());
        prop_assert!(m.matmul(k.matrix()).unwrap().is_zero());
        prop_assert_eq!(rank(k.matrix()), k.dim());
    }

    #[test]
    fn column_space_spans_columns(m in low_rank_matrix()) {
        let cs = Q::column_space(&m);
        prop_assert_eq!(cs.cols(), rank(&m));
        prop_assert!(Q::contains(&cs, &m).holds);
        prop_assert!(Q::contains(&m, &cs).holds);
    }

    #[test]
    fn exact_and_float_rank_agree(m in low_rank_matrix()) {
        prop_assert_eq!(rank(&m), rank(&m.to_f64()));
    }

    #[test]
    fn float_kernel_is_annihilated(m in low_rank_matrix()) {
        let f = m.to_f64();
        let k = kernel_basis(&f);
        prop_assert_eq!(k.dim(), m.cols() - rank(&m));
        let residual = f.matmul(k.matrix()).unwrap().frobenius_norm();
        prop_assert!(residual <= 1e-9 * (1.0 + f.frobenius_norm()));
    }

    #[test]
    fn solve_recovers_a_preimage(m in int_matrix(6, 6, 5), x in prop::collection::vec(-5i64..=5, 6)) {
        let x: Vec<Q> = x[..m.cols()].iter().map(|&v| Q::from_i64(v)).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = solve_in_image(&m, &b).unwrap();
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn intersection_dimension(a in low_rank_matrix(), b in low_rank_matrix()) {
        let n = a.rows().min(b.rows());
        let a = SubspaceBasis::<Q>::span_of(n, &a.block(0, 0, n, a.cols()).columns().collect::<Vec<_>>());
        let b = SubspaceBasis::<Q>::span_of(n, &b.block(0, 0, n, b.cols()).columns().collect::<Vec<_>>());
        let sum = rank(&a.matrix().hstack(b.matrix()).unwrap());
        let meet = intersect(&a, &b).unwrap();
        prop_assert_eq!(meet.dim() + sum, a.dim() + b.dim());
        prop_assert!(a.contains(&meet) && b.contains(&meet));
    }

    #[test]
    fn complement_within_is_orthogonal(m in low_rank_matrix(), keep in 0usize..4) {
        let outer = SubspaceBasis::<Q>::span_of(m.rows(), &m.columns().collect::<Vec<_>>());
        let inner_cols: Vec<Vec<Q>> = outer.vectors().take(keep).collect();
        let inner = SubspaceBasis::span_of(m.rows(), &inner_cols);
        let comp = complement_within(&inner, &outer).unwrap();
        prop_assert_eq!(comp.dim() + inner.dim(), outer.dim());
        prop_assert!(inner.matrix().transpose().matmul(comp.matrix()).unwrap().is_zero());
        prop_assert!(outer.contains(&comp));
    }

    #[test]
    fn projection_is_idempotent(m in low_rank_matrix(), v in prop::collection::vec(-9i64..=9, 8)) {
        let s = SubspaceBasis::<Q>::span_of(m.rows(), &m.columns().collect::<Vec<_>>());
        let v: Vec<Q> = v[..m.rows()].iter().map(|&x| Q::from_i64(x)).collect();
        let p = project_onto(&v, &s).unwrap();
        prop_assert_eq!(project_onto(&p, &s).unwrap(), p.clone());
        let residual: Vec<Q> = v.iter().zip(&p).map(|(a, b)| a - b).collect();
        prop_assert!(s.matrix().transpose().mul_vec(&residual).unwrap().iter().all(|x| *x == Q::from_i64(0)));
    }

    #[test]
    fn rational_text_round_trip(p in -10_000i64..10_000, q in 1i64..500) {
        let r = Q::new(p.into(), q.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r));
    }
}

#[test]
fn kernel_of_degenerate_shapes() {
    let wide = Mat::<Q>::zeros(0, 3);
    assert_eq!(kernel_basis(&wide).dim(), 3);
    let tall = Mat::<Q>::zeros(4, 0);
    assert_eq!(kernel_basis(&tall).dim(), 0);
    assert_eq!(rank(&tall), 0);
    assert_eq!(kernel_basis(&Mat::<f64>::zeros(0, 2)).dim(), 2);
}

#[test]
fn exact_kernel_vectors_are_coprime_integers() {
    let m = Mat::<Q>::from_row_major(
        1,
        3,
        vec![Q::new(1.into(), 2.into()), Q::new(1.into(), 3.into()), Q::from_i64(0)],
    );
    let k = kernel_basis(&m);
    assert_eq!(k.dim(), 2);
    for v in k.vectors() {
        assert!(v.iter().all(|x| x.is_integer()));
    }
    assert_eq!(k.vector(0), vec![Q::from_i64(-2), Q::from_i64(3), Q::from_i64(0)]);
}

#[test]
fn inconsistent_solve_is_reported() {
    let m = Mat::<Q>::from_i64(2, 1, &[1, 1]);
    let b = [Q::from_i64(1), Q::from_i64(2)];
    assert!(solve_in_image(&m, &b).is_err());
    assert!(solve_in_image(&m.to_f64(), &[1.0, 2.0]).is_err());
}

/// A nearly rank-one matrix on which a plain nalgebra SVD loses accuracy.
#[rustfmt::skip]
const RANK_ONE_ROWS: [[f64; 12]; 12] = [
    [2.328785526036295e-3,-7.336994494329502e-2,2.226894162966388e-3,-6.663310146290966e-2,6.726851356399345e-4,-6.963532989797722e-2,8.385532324477088e-2,2.5624725449991703e-1,6.9524249219934e-2,2.3866871846213572e-1,7.682487172908994e-2,2.3610261680704697e-1],
    [-1.7997756063259374e-17,-2.0122792321330962e-16,1.5178830414797062e-18,-1.3877787807814457e-17,1.5233040523421337e-17,6.938893903907228e-18,1.1102230246251565e-16,3.0531133177191805e-16,4.85722573273506e-17,3.885780586188048e-16,4.163336342344337e-17,2.7755575615628914e-17],
    [-1.1643927630181467e-3,3.668497247164747e-2,-1.1134470814832132e-3,3.331655073145467e-2,-3.363425678199598e-4,3.4817664948988546e-2,-4.192766162238533e-2,-1.2812362724995824e-1,-3.476212460996686e-2,-1.1933435923106746e-1,-3.841243586454485e-2,-1.1805130840352306e-1],
    [1.746589144527205e-3,-5.502745870747149e-2,1.6701706222248037e-3,-4.997482609718224e-2,5.045138517299629e-4,-5.2226497423482926e-2,6.289149243357828e-2,1.9218544087493808e-1,5.214318691495054e-2,1.7900153884660217e-1,5.7618653796817514e-2,1.7707696260528527e-1],
    [-1.1643927630181497e-3,3.6684972471647564e-2,-1.113447081483216e-3,3.331655073145475e-2,-3.3634256781996065e-4,3.4817664948988636e-2,-4.192766162238543e-2,-1.2812362724995854e-1,-3.476212460996694e-2,-1.193343592310678e-1,-3.841243586454495e-2,-1.1805130840352336e-1],
    [-1.7465891445272383e-3,5.502745870747104e-2,-1.6701706222247991e-3,4.997482609718215e-2,-5.04513851729932e-4,5.222649742348289e-2,-6.2891492433578e-2,-1.9218544087493733e-1,-5.2143186914950374e-2,-1.790015388466012e-1,-5.761865379681734e-2,-1.77076962605285e-1],
    [-4.657571052072495e-3,1.4673988988659026e-1,-4.453788325932807e-3,1.3326620292581948e-1,-1.3453702712796956e-3,1.392706597959545e-1,-1.6771064648954154e-1,-5.124945089998336e-1,-1.3904849843986777e-1,-4.77337436924271e-1,-1.5364974345817958e-1,-4.722052336140933e-1],
    [-1.9081958235744878e-17,-1.5959455978986625e-16,0e0,2.7755575615628914e-17,1.485356976305141e-17,5.551115123125783e-17,5.551115123125783e-17,1.3877787807814457e-16,6.938893903907228e-18,2.498001805406602e-16,6.938893903907228e-18,-8.326672684688674e-17],
    [2.3287855260362466e-3,-7.336994494329512e-2,2.2268941629663827e-3,-6.663310146290986e-2,6.726851356398547e-4,-6.963532989797726e-2,8.385532324477082e-2,2.562472544999169e-1,6.952424921993398e-2,2.3866871846213566e-1,7.682487172908986e-2,2.3610261680704692e-1],
    [-3.4931782890543915e-3,1.100549174149426e-1,-3.340341244449596e-3,9.994965219436476e-2,-1.009027703459761e-3,1.0445299484696598e-1,-1.257829848671562e-1,-3.843708817498753e-1,-1.0428637382990091e-1,-3.580030776932033e-1,-1.1523730759363476e-1,-3.541539252105703e-1],
    [2.328785526036246e-3,-7.33699449432951e-2,2.226894162966382e-3,-6.663310146290985e-2,6.726851356398545e-4,-6.963532989797724e-2,8.38553232447708e-2,2.5624725449991687e-1,6.952424921993396e-2,2.386687184621356e-1,7.682487172908983e-2,2.3610261680704686e-1],
    [3.4931782890543477e-3,-1.1005491741494272e-1,3.3403412444495905e-3,-9.994965219436452e-2,1.0090277034597887e-3,-1.0445299484696569e-1,1.2578298486715608e-1,3.8437088174987494e-1,1.0428637382990076e-1,3.580030776932031e-1,1.1523730759363457e-1,3.5415392521056954e-1],
];

#[test]
fn float_column_space_of_near_rank_one_matrix() {
    let m = Mat::from_row_major(12, 12, RANK_ONE_ROWS.iter().flatten().copied().collect());
    assert_eq!(rank(&m), 1);
    let basis = f64::column_space(&m);
    assert_eq!(basis.cols(), 1);
    // the dominant column direction, normalised
    let col = m.column(7);
    let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot: f64 = basis.column(0).iter().zip(&col).map(|(a, b)| a * b / norm).sum();
    assert!((dot.abs() - 1.0).abs() < 1e-12, "alignment {dot}");
    assert!(f64::contains(&basis, &m).holds);
}

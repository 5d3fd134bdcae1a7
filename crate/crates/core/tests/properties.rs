use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use frameforge_core::electromagnetic::frame_cross;
use frameforge_core::energy::simpson;
use frameforge_core::metric::inner;
use frameforge_core::{AmbientVector, MetricIndex};

fn vec4() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-10.0f64..10.0)
}

fn vec3() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-10.0f64..10.0)
}

fn eps() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(prop::bool::ANY).prop_map(|b| b.map(|x| if x { 1.0 } else { -1.0 }))
}

proptest! {
    #[test]
    fn inner_is_symmetric_and_bilinear(u in vec4(), w in vec4(), z in vec4(), a in -5.0f64..5.0, v in 0u8..3) {
        let idx = MetricIndex::new(v).unwrap();
        let (u, w, z) = (AmbientVector::new(u, idx), AmbientVector::new(w, idx), AmbientVector::new(z, idx));
        assert_abs_diff_eq!(inner(&u, &w), inner(&w, &u), epsilon = 1e-12);
        let lhs = inner(&(u * a + z), &w);
        assert_abs_diff_eq!(lhs, a * inner(&u, &w) + inner(&z, &w), epsilon = 1e-9);
    }

    #[test]
    fn frame_cross_is_antisymmetric_and_bilinear(a in vec3(), b in vec3(), c in vec3(), k in -5.0f64..5.0, e in eps()) {
        let ab = frame_cross(&a, &b, &e);
        let ba = frame_cross(&b, &a, &e);
        let ak: [f64; 3] = [0, 1, 2].map(|i| k * a[i] + c[i]);
        let lhs = frame_cross(&ak, &b, &e);
        let cb = frame_cross(&c, &b, &e);
        for i in 0..3 {
            assert_abs_diff_eq!(ab[i], -ba[i], epsilon = 1e-12);
            assert_abs_diff_eq!(lhs[i], k * ab[i] + cb[i], epsilon = 1e-9);
        }
    }

    #[test]
    fn simpson_is_additive(vals in prop::collection::vec(-10.0f64..10.0, 5..40), h in 0.01f64..1.0) {
        let n = if vals.len() % 2 == 0 { vals.len() - 1 } else { vals.len() };
        let v = &vals[..n];
        let cut = 2 * ((n / 2) / 2).max(1);
        let whole = simpson(v, h).unwrap();
        let parts = simpson(&v[..=cut], h).unwrap() + simpson(&v[cut..], h).unwrap();
        assert_abs_diff_eq!(whole, parts, epsilon = 1e-10);
    }
}

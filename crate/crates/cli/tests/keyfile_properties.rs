use proptest::prelude::*;
use svdmark::liu_tan::lt_embed;
use svdmark::pc::pc_embed;
use svdmark::synth::smooth_field;
use svdmark_cli::{KeyFile, KeyFileError};

fn keys(rows: usize, cols: usize, seed: u64, alpha: f64) -> [KeyFile; 2] {
    let cover = smooth_field(rows, cols, seed);
    let mark = smooth_field(rows, cols, seed + 1);
    [
        KeyFile::LiuTan(lt_embed(&cover, &mark, alpha).unwrap().1),
        KeyFile::Pc(pc_embed(&cover, &mark, alpha).unwrap().1),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn serialization_is_a_bijection(
        rows in 1usize..9,
        cols in 1usize..9,
        seed in any::<u32>(),
        alpha in 0.001f64..1.0,
    ) {
        for key in keys(rows, cols, u64::from(seed), alpha) {
            let bytes = key.to_bytes();
            let parsed = KeyFile::from_bytes(&bytes).unwrap();
            prop_assert_eq!(parsed.scheme_name(), key.scheme_name());
            prop_assert_eq!(parsed.shape(), (rows, cols));
            prop_assert_eq!(parsed.to_bytes(), bytes);
        }
    }

    #[test]
    fn every_strict_prefix_is_rejected(seed in any::<u32>(), cut in 0.0f64..1.0) {
        for key in keys(4, 3, u64::from(seed), 0.05) {
            let bytes = key.to_bytes();
            let len = (cut * bytes.len() as f64) as usize;
            prop_assert!(KeyFile::from_bytes(&bytes[..len]).is_err());
        }
    }

    #[test]
    fn appended_bytes_are_rejected(seed in any::<u32>(), extra in 1usize..16) {
        for key in keys(3, 4, u64::from(seed), 0.05) {
            let mut bytes = key.to_bytes();
            bytes.extend(std::iter::repeat(0u8).take(extra));
            prop_assert!(matches!(
                KeyFile::from_bytes(&bytes),
                Err(KeyFileError::TrailingBytes(_))
            ));
        }
    }
}

//! Runs the reference-search experiment against both schemes and prints one
//! line per seed.
//!
//! ```text
//! cargo run --release -p svdmark --example ambiguity -- [size] [alpha] [seeds]
//! ```

use svdmark::analysis::{distort_gaussian, distort_quantize, ncc, psnr, PEAK_8BIT};
use svdmark::liu_tan::{lt_embed, lt_extract, lt_keygen};
use svdmark::pc::{pc_embed, pc_extract, pc_reference_search};
use svdmark::synth::smooth_field;

fn main() -> Result<(), svdmark::Error> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let size: usize = args.first().map_or(128, |s| s.parse().expect("size"));
    let alpha: f64 = args.get(1).map_or(0.05, |s| s.parse().expect("alpha"));
    let seeds: u64 = args.get(2).map_or(10, |s| s.parse().expect("seeds"));

    println!("seed lt_forged pc_search lt_forged_on_pc lt_psnr pc_psnr pc_noise pc_quant");
    for seed in 0..seeds {
        let cover = smooth_field(size, size, 3 * seed + 1000);
        let embedded = smooth_field(size, size, 3 * seed + 1001);
        let reference = smooth_field(size, size, 3 * seed + 1002);

        let (lt_marked, _) = lt_embed(&cover, &embedded, alpha)?;
        let (forged, _) = lt_keygen(&cover, &reference, alpha)?;
        let lt_found = ncc(&reference, &lt_extract(&lt_marked, &forged)?)?;

        let (pc_marked, keys) = pc_embed(&cover, &embedded, alpha)?;
        let pc_found = ncc(&reference, &pc_reference_search(&pc_marked, &keys, &reference)?)?;
        let lt_on_pc = ncc(&reference, &lt_extract(&pc_marked, &forged)?)?;

        let noisy = distort_gaussian(&pc_marked, 2.0, seed)?;
        let pc_noise = ncc(&embedded, &pc_extract(&noisy, &keys)?)?;
        let pc_quant = ncc(&embedded, &pc_extract(&distort_quantize(&pc_marked), &keys)?)?;

        println!(
            "{seed:>4} {lt_found:>9.4} {pc_found:>9.4} {lt_on_pc:>15.4} {:>7.2} {:>7.2} {pc_noise:>8.4} {pc_quant:>8.4}",
            psnr(&cover, &lt_marked, PEAK_8BIT)?,
            psnr(&cover, &pc_marked, PEAK_8BIT)?,
        );
    }
    Ok(())
}

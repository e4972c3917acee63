#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use svdmark::image::{matrix_to_image, read_pgm, write_pgm};
use svdmark::synth::smooth_field;
use svdmark::Matrix;

pub fn svdmark() -> Command {
    Command::new(env!("CARGO_BIN_EXE_svdmark"))
}

pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    svdmark().args(args).output().expect("spawn svdmark")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Value of `key=` in the command's standard output.
pub fn value(o: &Output, key: &str) -> f64 {
    let text = stdout(o);
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key}= in {text:?} (stderr {:?})", stderr(o)));
    line.parse().unwrap()
}

pub fn write_matrix(path: &Path, m: &Matrix) {
    std::fs::write(path, write_pgm(&matrix_to_image(m))).unwrap();
}

pub fn read_matrix(path: &Path) -> Matrix {
    read_pgm(&std::fs::read(path).unwrap()).unwrap().to_matrix()
}

/// Writes a seeded smooth field as an 8-bit PGM.
pub fn field_pgm(dir: &Path, name: &str, size: usize, seed: u64) -> PathBuf {
    let path = dir.join(name);
    write_matrix(&path, &smooth_field(size, size, seed));
    path
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A cover with 32 levels of headroom at both ends, so embedding does not clip at export.
pub fn cover_pgm(dir: &Path, name: &str, size: usize, seed: u64) -> PathBuf {
    let path = dir.join(name);
    write_matrix(&path, &smooth_field(size, size, seed).map(|x| 32.0 + x * 191.0 / 255.0));
    path
}

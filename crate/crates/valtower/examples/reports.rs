//! Rendering the same report as TSV, Markdown and JSON.
use valtower::monomial::Matrix2;
use valtower::report::{monomialize_report, tower_report, Format, RunConfig};

fn main() -> valtower::Result<()> {
    let cfg = RunConfig { levels: 2, seed: 42, ..RunConfig::default() };
    let r = tower_report(&cfg)?;
    print!("{}", r.render(Format::Md));
    print!("{}", monomialize_report(&cfg, &Matrix2::new(2, 1, 1, 3))?.render(Format::Json));
    Ok(())
}

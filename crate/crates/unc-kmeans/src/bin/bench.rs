use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(unc_kmeans::bench::cli_main(std::env::args()) as u8)
}

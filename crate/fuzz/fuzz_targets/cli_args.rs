#![no_main]

use bottlab::cli::Cli;
use clap::Parser;
use libfuzzer_sys::fuzz_target;

// Arguments are NUL separated. Only parsing and validation run, never a suite.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("bottlab").chain(text.split('\0'));
    if let Ok(cli) = Cli::try_parse_from(args) {
        let _ = cli.command.args().sweep_config();
        let _ = cli.command.suites();
    }
});

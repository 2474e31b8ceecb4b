use std::process::ExitCode;

use floquet_core::harness::{emit_csv, emit_svg, exit_code, parse_config, run_sweep};
use floquet_core::Error;

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let config = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(e) if e.is_informational() => {
            print!("{e}");
            return code(exit_code::SUCCESS);
        }
        Err(e) => {
            eprintln!("configuration error: {e}");
            return code(exit_code::CONFIG);
        }
    };

    let outcome = match run_sweep(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("sweep failed: {e}");
            return code(exit_code::CONFIG);
        }
    };

    let written = emit_csv(&outcome.records, &config.out_path).and_then(|()| match &config.svg_path {
        Some(svg) => emit_svg(&outcome.records, svg, config.omega),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("cannot write output: {e}");
        return code(match e {
            Error::Io { .. } => exit_code::IO,
            _ => exit_code::CONFIG,
        });
    }

    let unconverged = outcome.unconverged();
    eprintln!(
        "wrote {} records to {} ({unconverged} unconverged)",
        outcome.records.len(),
        config.out_path.display()
    );
    if unconverged > 0 {
        code(exit_code::UNCONVERGED)
    } else {
        code(exit_code::SUCCESS)
    }
}

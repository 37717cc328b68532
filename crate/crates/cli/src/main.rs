mod args;
mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Cache, Failure, Status};

fn run(cli: Cli) -> Result<Status, Failure> {
    let (table, status) = match &cli.command {
        Command::Gen { seq, max, limit, cache } => {
            let mut cache = Cache::open(cache)?;
            let res = commands::gen(*seq, *max, limit.as_deref(), &mut cache)?;
            cache.save()?;
            res
        }
        Command::Oracle {
            m,
            n,
            compare,
            area_limit,
            cache,
        } => {
            let mut cache = Cache::open(cache)?;
            let res = commands::oracle(*m, *n, *compare, *area_limit, &mut cache)?;
            cache.save()?;
            res
        }
        Command::Factor {
            seq,
            index,
            max,
            trial_bound,
            cache,
        } => {
            let mut cache = Cache::open(cache)?;
            let res = commands::factor_cmd(*seq, index, *max, *trial_bound, &mut cache)?;
            cache.save()?;
            res
        }
        Command::Nu {
            p,
            seq,
            max,
            check_bound,
            cache,
        } => {
            let mut cache = Cache::open(cache)?;
            let res = commands::nu(*p, *seq, *max, *check_bound, &mut cache)?;
            cache.save()?;
            res
        }
        Command::Mod { seq, modulus, max } => commands::modulo(*seq, modulus, *max)?,
        Command::Period {
            seq,
            modulus,
            max,
            hint_pp1,
        } => commands::period(*seq, *modulus, *max, *hint_pp1)?,
        Command::Series { check, order } => commands::series_cmd(*check, *order)?,
        Command::Conjecture { id, primes, max, seq } => commands::conjecture(*id, primes, *max, *seq)?,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match table.write(cli.format, &mut out).and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Check(format!("writing output: {e}"))),
        _ => Ok(status),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! Command-line front end. `run` is the whole program minus process exit,
//! so it can be driven from tests with in-memory streams.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use crate::ans::Ans;
use crate::automata::{compile_regex, dump_dfa, factorial_closure, Dfa, OrderedAlphabet};
use crate::codec::{block_compress_with_jobs, block_decompress_with_jobs, BlockCodecConfig, Converter, Frame};
use crate::counting::{CountCache, OpCounters};
use crate::growth::{self, GrowthClass};

/// Printed in place of the empty word, and accepted as input for it.
pub const EPSILON_TOKEN: &str = "<eps>";

#[derive(Debug, Parser)]
#[command(name = "ansc", version, about = "Ranking, growth analysis and base-conversion compression over regular languages")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    /// Extra diagnostics on stderr.
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Append matrix-matrix, matrix-vector and vector-vector product counts.
    #[arg(long, global = true)]
    pub counters: bool,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Growth class, index, polynomial index and optional counts.
    Analyze {
        #[command(flatten)]
        lang: Language,
        /// Print C(0..N) and the cumulative counts C≤(0..N).
        #[arg(long, value_name = "N")]
        counts: Option<usize>,
        /// Print the minimal automaton.
        #[arg(long)]
        dump_dfa: bool,
    },
    /// Zero-based radix rank of a word.
    Rank {
        #[command(flatten)]
        lang: Language,
        #[arg(long)]
        word: String,
    },
    /// Word of a given rank.
    Unrank {
        #[command(flatten)]
        lang: Language,
        #[arg(long = "n", value_name = "N")]
        n: BigUint,
    },
    /// Convert one word between two numeration systems.
    Convert {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        word: String,
    },
    /// Block-compress a file.
    Compress {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        io: BlockIo,
    },
    /// Invert `compress`; takes the same language flags.
    Decompress {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        io: BlockIo,
    },
    /// Run built-in sanity checks.
    Selftest,
}

#[derive(Debug, Args)]
pub struct Language {
    #[arg(long)]
    pub regex: String,
    /// Ordered alphabet; position is rank. Accepts \xHH, \n, \r, \t, \\.
    #[arg(long)]
    pub alphabet: String,
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long = "src-regex", alias = "regex")]
    pub src_regex: String,
    #[arg(long)]
    pub alphabet: String,
    #[arg(long)]
    pub dst_regex: String,
    #[arg(long)]
    pub dst_alphabet: String,
}

#[derive(Debug, Args)]
pub struct BlockIo {
    #[arg(long)]
    pub block_len: usize,
    /// Defaults to stdin.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Defaults to stdout.
    #[arg(long = "out")]
    pub output: Option<PathBuf>,
    /// Use the source language as given instead of its factorial closure.
    #[arg(long)]
    pub assume_factorial: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Library(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Library(_) => 1,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Library(m) | Failure::Io(m) => m,
        }
    }
}

fn lib<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Library(e.to_string())
}

fn io_err(e: io::Error) -> Failure {
    Failure::Io(e.to_string())
}

/// Parses `args` (including the program name) and executes the verb.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            let informational = matches!(e.kind(), DisplayHelp | DisplayVersion);
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if informational { 0 } else { 2 };
        }
    };
    match execute(&cli, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn parse_alphabet(text: &str) -> Result<OrderedAlphabet, Failure> {
    let bytes = unescape(text).ok_or_else(|| Failure::Usage(format!("malformed escape in alphabet {text:?}")))?;
    OrderedAlphabet::new(&bytes).map_err(|e| Failure::Usage(format!("alphabet {text:?}: {e}")))
}

fn unescape(s: &str) -> Option<Vec<u8>> {
    let mut out = Vec::with_capacity(s.len());
    let mut bytes = s.bytes();
    while let Some(b) = bytes.next() {
        if b != b'\\' {
            out.push(b);
            continue;
        }
        out.push(match bytes.next()? {
            b'n' => b'\n',
            b'r' => b'\r',
            b't' => b'\t',
            b'\\' => b'\\',
            b'x' => {
                let hi = (bytes.next()? as char).to_digit(16)?;
                let lo = (bytes.next()? as char).to_digit(16)?;
                (hi * 16 + lo) as u8
            }
            _ => return None,
        });
    }
    Some(out)
}

fn word_arg(w: &str) -> &[u8] {
    if w == EPSILON_TOKEN {
        b""
    } else {
        w.as_bytes()
    }
}

fn show_word(w: &[u8]) -> String {
    if w.is_empty() {
        EPSILON_TOKEN.to_owned()
    } else {
        String::from_utf8_lossy(w).into_owned()
    }
}

fn compile(regex: &str, alphabet: &str) -> Result<Dfa, Failure> {
    let alphabet = parse_alphabet(alphabet)?;
    compile_regex(regex, &alphabet).map_err(lib)
}

fn system(regex: &str, alphabet: &str) -> Result<Ans, Failure> {
    Ans::new(compile(regex, alphabet)?).map_err(lib)
}

fn report_counters(out: &mut dyn Write, ops: &OpCounters) -> io::Result<()> {
    writeln!(
        out,
        "M-M {}\nM-V {}\nV-V {}",
        ops.matrix_matrix, ops.matrix_vector, ops.vector_vector
    )
}

fn execute(cli: &Cli, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let mut ops = OpCounters::default();
    match &cli.verb {
        Verb::Analyze { lang, counts, dump_dfa: dump } => {
            let dfa = compile(&lang.regex, &lang.alphabet)?;
            let info = growth::analyze(&dfa).map_err(lib)?;
            let mut text = format!("class: {}\n", info.class.as_str());
            text += &format!("index: {:.12}\n", info.index);
            text += &match info.polynomial_index {
                Some(pd) => format!("pd: {pd}\n"),
                None => "pd: none\n".to_owned(),
            };
            text += &format!("sccs: {}\n", info.scc_count);
            text += &format!("theta: {}\n", info.theta());
            if cli.verbose && info.class == GrowthClass::Exponential {
                writeln!(stderr, "index tolerance {:e}", info.index_tolerance).map_err(io_err)?;
            }
            stdout.write_all(text.as_bytes()).map_err(io_err)?;
            if let Some(n) = *counts {
                let cache = CountCache::from_dfa(&dfa).map_err(lib)?;
                let mut out = String::from("counts:\n");
                for k in 0..=n {
                    out += &format!("{}\n", cache.count_with(k, &mut ops));
                }
                out += "cumulative:\n";
                for k in 0..=n {
                    out += &format!("{}\n", cache.cum_count_with(k as i64, &mut ops));
                }
                stdout.write_all(out.as_bytes()).map_err(io_err)?;
            }
            if *dump {
                stdout.write_all(dump_dfa(&dfa).as_bytes()).map_err(io_err)?;
            }
        }
        Verb::Rank { lang, word } => {
            let s = system(&lang.regex, &lang.alphabet)?;
            let rank = s.val_with(word_arg(word), &mut ops).map_err(lib)?;
            writeln!(stdout, "{rank}").map_err(io_err)?;
        }
        Verb::Unrank { lang, n } => {
            let s = system(&lang.regex, &lang.alphabet)?;
            let w = s.rep_with(n, &mut ops);
            writeln!(stdout, "{}", show_word(&w)).map_err(io_err)?;
        }
        Verb::Convert { pair, word } => {
            let src = system(&pair.src_regex, &pair.alphabet)?;
            let dst = system(&pair.dst_regex, &pair.dst_alphabet)?;
            let rank = src.val_with(word_arg(word), &mut ops).map_err(lib)?;
            let image = dst.rep_with(&rank, &mut ops);
            writeln!(stdout, "{}", show_word(&image)).map_err(io_err)?;
            if cli.verbose && !word_arg(word).is_empty() {
                let cr = image.len() as f64 / word_arg(word).len() as f64;
                writeln!(stderr, "rank {rank}, ratio {cr:.6}").map_err(io_err)?;
            }
        }
        Verb::Compress { pair, io } | Verb::Decompress { pair, io } => {
            let compressing = matches!(cli.verb, Verb::Compress { .. });
            let cfg = block_config(pair, io)?;
            let input = match &io.input {
                Some(path) => fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => {
                    let mut buf = Vec::new();
                    stdin.read_to_end(&mut buf).map_err(io_err)?;
                    buf
                }
            };
            let output = if compressing {
                let frame = block_compress_with_jobs(&cfg, &input, io.jobs).map_err(lib)?;
                if cli.verbose && !input.is_empty() {
                    writeln!(
                        stderr,
                        "{} blocks, tail {}, length field {} bits, ratio {:.6}",
                        frame.blocks.len(),
                        frame.tail.len(),
                        cfg.len_field_bits,
                        cfg.frame_cr(&frame, input.len())
                    )
                    .map_err(io_err)?;
                }
                frame.to_bytes().map_err(lib)?
            } else {
                let frame = Frame::from_bytes(&input).map_err(lib)?;
                block_decompress_with_jobs(&cfg, &frame, io.jobs).map_err(lib)?
            };
            match &io.output {
                Some(path) => fs::write(path, &output).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => stdout.write_all(&output).map_err(io_err)?,
            }
        }
        Verb::Selftest => return selftest(stdout),
    }
    if cli.counters {
        report_counters(stdout, &ops).map_err(io_err)?;
    }
    Ok(())
}

fn block_config(pair: &Pair, io: &BlockIo) -> Result<BlockCodecConfig, Failure> {
    if io.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".to_owned()));
    }
    let mut src = compile(&pair.src_regex, &pair.alphabet)?;
    if !io.assume_factorial {
        src = factorial_closure(&src);
    }
    let src = Ans::new(src).map_err(lib)?;
    let dst = system(&pair.dst_regex, &pair.dst_alphabet)?;
    BlockCodecConfig::new(src, dst, io.block_len).map_err(lib)
}

fn selftest(stdout: &mut dyn Write) -> Result<(), Failure> {
    let mut failed = Vec::new();
    let mut check = |name: &str, ok: bool| -> io::Result<()> {
        if !ok {
            failed.push(name.to_owned());
        }
        writeln!(stdout, "{} {name}", if ok { "ok" } else { "FAIL" })
    };
    let fib = system("(a|ba)*", "ab")?;
    let binary = system("0|1[01]*", "01")?;

    let counts: Vec<u32> = (0..5).map(|n| fib.cache().count(n).try_into().unwrap_or(0)).collect();
    check("fibonacci counts", counts == [1, 1, 2, 3, 5]).map_err(io_err)?;

    let goldens = ["0", "1", "10", "11", "100"];
    let ok = goldens.iter().enumerate().all(|(n, w)| {
        binary.rep(&BigUint::from(n)) == w.as_bytes() && binary.val(w.as_bytes()) == Ok(BigUint::from(n))
    });
    check("binary ranks", ok).map_err(io_err)?;

    let info = growth::analyze(fib.dfa()).map_err(lib)?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    check("fibonacci index", (info.index - phi).abs() < 1e-6 && info.polynomial_index == Some(0)).map_err(io_err)?;

    let cfg = BlockCodecConfig::new(Ans::new(factorial_closure(fib.dfa())).map_err(lib)?, binary.clone(), 8)
        .map_err(lib)?;
    let sample = b"abaababaabaababaababa";
    let round = block_compress_with_jobs(&cfg, sample, 1)
        .and_then(|f| block_decompress_with_jobs(&cfg, &f, 1));
    check("block round trip", round.as_deref() == Ok(&sample[..])).map_err(io_err)?;

    let cv = Converter::new(fib, binary);
    check("conversion inverse", cv.reversed().convert(&cv.convert(b"abaa").unwrap_or_default()) == Ok(b"abaa".to_vec()))
        .map_err(io_err)?;

    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Library(format!("selftest failed: {}", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("ansc").chain(args.iter().copied());
        let code = run(argv, &mut io::empty(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unescape_alphabets() {
        assert_eq!(unescape("ab").unwrap(), b"ab");
        assert_eq!(unescape(r"\x00\n\\").unwrap(), b"\x00\n\\");
        assert!(unescape(r"\q").is_none());
        assert!(unescape(r"\x4").is_none());
    }

    #[test]
    fn unrank_and_rank() {
        assert_eq!(call(&["unrank", "--regex", "(a|ba)*", "--alphabet", "ab", "--n", "5"]).1, "aba\n");
        assert_eq!(call(&["unrank", "--regex", "(a|ba)*", "--alphabet", "ab", "--n", "0"]).1, "<eps>\n");
        assert_eq!(call(&["rank", "--regex", "0|1(0|1)*", "--alphabet", "01", "--word", "100"]).1, "4\n");
        assert_eq!(call(&["rank", "--regex", "(a|ba)*", "--alphabet", "ab", "--word", "<eps>"]).1, "0\n");
    }

    #[test]
    fn analyze_fibonacci() {
        let (code, out, _) = call(&["analyze", "--regex", "(a|ba)*", "--alphabet", "ab", "--counts", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("index: 1.618033988750\n"));
        assert!(out.contains("pd: 0\n"));
        assert!(out.contains("counts:\n1\n1\n2\n3\n5\ncumulative:\n1\n2\n4\n7\n12\n"));
    }

    #[test]
    fn counters_follow_output() {
        let word = "a".repeat(10);
        let (_, out, _) = call(&["rank", "--regex", "(a|ba)*", "--alphabet", "ab", "--word", &word, "--counters"]);
        assert_eq!(out, "143\nM-M 0\nM-V 9\nV-V 1\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["rank", "--regex", "a*"]).0, 2);
        assert_eq!(call(&["rank", "--regex", "a*", "--alphabet", "aa", "--word", "a"]).0, 2);
        assert_eq!(call(&["rank", "--regex", "(a", "--alphabet", "a", "--word", "a"]).0, 1);
        assert_eq!(call(&["rank", "--regex", "(a|ba)*", "--alphabet", "ab", "--word", "bb"]).0, 1);
        let missing = ["compress", "--src-regex", "a*", "--alphabet", "a", "--dst-regex", "a*"];
        let missing: Vec<&str> = missing
            .iter()
            .copied()
            .chain(["--dst-alphabet", "a", "--block-len", "2", "--in", "/nonexistent/x"])
            .collect();
        assert_eq!(call(&missing).0, 3);
    }

    #[test]
    fn selftest_passes() {
        let (code, out, _) = call(&["selftest"]);
        assert_eq!(code, 0, "{out}");
        assert!(!out.contains("FAIL"));
    }
}

//! `cocylab` — command-line surface over the exact cocycle toolkit.
//!
//! Every command prints a single JSON document on stdout. Exit codes:
//! 0 = success / audited property holds, 1 = a violation or a NonSplit
//! certificate was found (the output is still valid JSON), 2 = usage or
//! parse error (message on stderr). Runs with identical flags and seeds are
//! byte-identical; rationals are serialized as exact "p/q" strings.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Value};
use std::process::ExitCode;

use cocylab::cocycle::{
    asai_cocycle, induced_mod_split_witness, matsumoto_cocycle, quasichar_coboundary,
    zero_cocycle, CoeffGroup, Cocycle2,
};
use cocylab::encode;
use cocylab::extension::{
    braid_discrepancy, full_twist_center, group_axioms_audit, power_telescope, ExtGroup,
};
use cocylab::group::{Element, Group};
use cocylab::quasichar::{QcKind, QuasiChar, WitnessFamily};
use cocylab::report::AuditReport;
use cocylab::sl2::{
    abelianization_class, asai_h, asai_split_f, chevalley_audit, congruence_data, lemma_matrix,
    matsumoto_h, st_decompose, Mat2,
};
use cocylab::splitcert::{certify_split, thick_pair, CayleyBall, SplitDomain, SplitVerdict};
use cocylab::steinberg::{
    audit_core, audit_derived, bimultiplicativity_probe, squares_check, SymbolUnderTest,
};
use cocylab::words::Word;

#[derive(Parser)]
#[command(
    name = "cocylab",
    version,
    about = "Exact computations with bounded 2-cocycles, group extensions, \
             quasi-characters, Steinberg symbols, and splitness certificates",
    after_help = "All output is JSON on stdout. Exit codes: 0 = ok / property \
                  holds; 1 = violation or NonSplit certificate found; 2 = usage \
                  or parse error. Seeded commands are bit-reproducible. The \
                  environment variable COCYLAB_MAX_BALL caps Cayley-ball size."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduced words in free groups and free products of cyclics
    #[command(subcommand)]
    Words(WordsCmd),
    /// Counting quasi-characters and their witness families
    #[command(subcommand)]
    Qc(QcCmd),
    /// 2-cocycle evaluation and seeded identity audits
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// SL2(Z) machinery: sign cocycle, splitting function, decompositions
    #[command(subcommand)]
    Sl2(Sl2Cmd),
    /// Steinberg-type symbol audits over the rationals
    #[command(subcommand)]
    Steinberg(SteinbergCmd),
    /// Extension-group arithmetic twisted by a cocycle
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Splitness certification on Cayley balls and thickness probes
    #[command(subcommand)]
    Split(SplitCmd),
    /// Lifted braid-generator computations in the sign extension
    #[command(subcommand)]
    Braid(BraidCmd),
}

// ---------------------------------------------------------------------------
// Shared flag blocks
// ---------------------------------------------------------------------------

#[derive(Args)]
struct WordGroupArgs {
    /// Free-group rank (selects the free group; conflicts with -m/-n)
    #[arg(long, conflicts_with_all = ["m", "n"])]
    rank: Option<u32>,
    /// First modulus of Z_m * Z_n (requires --n)
    #[arg(short, long, requires = "n")]
    m: Option<u32>,
    /// Second modulus of Z_m * Z_n (requires --m)
    #[arg(short, long, requires = "m")]
    n: Option<u32>,
}

impl WordGroupArgs {
    fn group(&self) -> Result<Group, String> {
        match (self.m, self.n) {
            (Some(m), Some(n)) => {
                if m < 2 || n < 2 {
                    return Err(format!("moduli must be at least 2, got ({m}, {n})"));
                }
                Ok(Group::FreeProduct { m, n })
            }
            _ => Ok(Group::Free { rank: self.rank.unwrap_or(2) }),
        }
    }

    fn parse_word(&self, s: &str) -> Result<Word, String> {
        match self.group()? {
            Group::Free { rank } => {
                Ok(Word::Free(encode::parse_free_word(rank, s).map_err(|e| e.to_string())?))
            }
            Group::FreeProduct { m, n } => {
                Ok(Word::Fp(encode::parse_fp_word(m, n, s).map_err(|e| e.to_string())?))
            }
            _ => unreachable!("word groups are free or free products"),
        }
    }
}

fn encode_word(w: &Word) -> String {
    match w {
        Word::Free(v) => encode::encode_free_word(v),
        Word::Fp(v) => encode::encode_fp_word(v),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CocycleName {
    /// The sign 2-cocycle on SL2(Z)
    Asai,
    /// Matsumoto's symbol-based 2-cocycle on SL2(Z)
    Matsumoto,
    /// The zero cocycle on SL2(Z)
    Zero,
    /// Coboundary of a counting quasi-character (requires --pattern)
    Coboundary,
}

#[derive(Args)]
struct CocycleArgs {
    /// Which built-in cocycle to use
    #[arg(long, value_enum)]
    cocycle: CocycleName,
    /// Induce coefficients modulo N (integer cocycles only)
    #[arg(long)]
    modulus: Option<u64>,
    /// Counting pattern for --cocycle coboundary, e.g. "a1^2"
    #[arg(long)]
    pattern: Option<String>,
    /// Count occurrences cyclically (conjugation-invariant counting)
    #[arg(long)]
    cyclic: bool,
    #[command(flatten)]
    word_group: WordGroupArgs,
}

impl CocycleArgs {
    fn build(&self) -> Result<Cocycle2, String> {
        let h = match self.cocycle {
            CocycleName::Asai => asai_cocycle(),
            CocycleName::Matsumoto => matsumoto_cocycle(),
            CocycleName::Zero => zero_cocycle(Group::Sl2, CoeffGroup::integers()),
            CocycleName::Coboundary => {
                let Some(pattern) = &self.pattern else {
                    return Err("--cocycle coboundary requires --pattern".to_string());
                };
                let word = self.word_group.parse_word(pattern)?;
                let kind = match (&word, self.cyclic) {
                    (Word::Free(_), false) => QcKind::FwFree,
                    (Word::Free(_), true) => QcKind::EwFree,
                    (Word::Fp(_), false) => QcKind::FwFp,
                    (Word::Fp(_), true) => QcKind::EwFp,
                };
                let qc = QuasiChar::new(kind, word).map_err(|e| e.to_string())?;
                quasichar_coboundary(&qc)
            }
        };
        match self.modulus {
            None => Ok(h),
            Some(n) => h.induce_quotient(&[n]).map_err(|e| e.to_string()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SymbolName {
    /// c'(x,y) = 1 exactly when x < 0 and y < 0
    Ordered,
    /// The identically-zero symbol
    Trivial,
    /// Decoy: XOR of the two signs (fails (S1) and (S3))
    Xor,
}

impl SymbolName {
    fn build(self) -> SymbolUnderTest {
        match self {
            SymbolName::Ordered => SymbolUnderTest::ordered(),
            SymbolName::Trivial => SymbolUnderTest::trivial(),
            SymbolName::Xor => SymbolUnderTest::xor_signs(),
        }
    }
}

// ---------------------------------------------------------------------------
// words
// ---------------------------------------------------------------------------

#[derive(Subcommand)]
enum WordsCmd {
    /// Multiply two words
    Mul {
        #[command(flatten)]
        group: WordGroupArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Invert a word
    Inv {
        #[command(flatten)]
        group: WordGroupArgs,
        #[arg(long)]
        x: String,
    },
    /// Raise a word to an integer power
    Pow {
        #[command(flatten)]
        group: WordGroupArgs,
        #[arg(long)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        exp: i64,
    },
    /// Count (overlapping) occurrences of a pattern
    Count {
        #[command(flatten)]
        group: WordGroupArgs,
        #[arg(long)]
        word: String,
        #[arg(long)]
        pattern: String,
        /// Count around the cyclic closure instead of linearly
        #[arg(long)]
        cyclic: bool,
    },
    /// Canonical representative of the cyclic (conjugacy-class) word
    Canon {
        #[command(flatten)]
        group: WordGroupArgs,
        #[arg(long)]
        word: String,
    },
}

fn run_words(cmd: WordsCmd) -> Result<(Value, ExitCode), String> {
    let out = match cmd {
        WordsCmd::Mul { group, x, y } => {
            let (x, y) = (group.parse_word(&x)?, group.parse_word(&y)?);
            let z = x.multiply(&y).map_err(|e| e.to_string())?;
            json!({"value": encode_word(&z)})
        }
        WordsCmd::Inv { group, x } => {
            let x = group.parse_word(&x)?;
            json!({"value": encode_word(&x.invert())})
        }
        WordsCmd::Pow { group, x, exp } => {
            let x = group.parse_word(&x)?;
            json!({"value": encode_word(&x.pow(exp))})
        }
        WordsCmd::Count { group, word, pattern, cyclic } => {
            let (w, p) = (group.parse_word(&word)?, group.parse_word(&pattern)?);
            let count = w.count_occurrences(&p, cyclic).map_err(|e| e.to_string())?;
            json!({"value": count})
        }
        WordsCmd::Canon { group, word } => {
            let w = group.parse_word(&word)?;
            let canon = cocylab::words::CyclicWord::from_word(&w);
            json!({"value": encode_cyclic(&canon, &group.group()?)})
        }
    };
    Ok((out, ExitCode::SUCCESS))
}

fn encode_cyclic(c: &cocylab::words::CyclicWord, group: &Group) -> String {
    match group {
        Group::Free { rank } => {
            let pairs: Vec<(u32, i64)> =
                c.free_ring().iter().map(|s| (s.gen, s.exp)).collect();
            let w = cocylab::words::FreeWord::reduce(*rank, &pairs)
                .expect("canonical ring re-parses");
            encode::encode_free_word(&w)
        }
        Group::FreeProduct { m, n } => {
            let w = cocylab::words::FpWord::normalize(*m, *n, c.fp_ring())
                .expect("canonical ring re-parses");
            encode::encode_fp_word(&w)
        }
        _ => unreachable!("cyclic words live in word groups"),
    }
}

// ---------------------------------------------------------------------------
// qc
// ---------------------------------------------------------------------------

#[derive(Args)]
struct PatternArgs {
    /// Counting pattern, e.g. "a1^2" or "A1 B1"
    #[arg(long)]
    pattern: String,
    /// Count occurrences cyclically (conjugation-invariant counting)
    #[arg(long)]
    cyclic: bool,
    #[command(flatten)]
    group: WordGroupArgs,
}

impl PatternArgs {
    fn build(&self) -> Result<QuasiChar, String> {
        let word = self.group.parse_word(&self.pattern)?;
        let kind = match (&word, self.cyclic) {
            (Word::Free(_), false) => QcKind::FwFree,
            (Word::Free(_), true) => QcKind::EwFree,
            (Word::Fp(_), false) => QcKind::FwFp,
            (Word::Fp(_), true) => QcKind::EwFp,
        };
        QuasiChar::new(kind, word).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum QcCmd {
    /// Evaluate the quasi-character at a word
    Eval {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        g: String,
    },
    /// Sampled image of the coboundary (defect) of the quasi-character
    Image {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check f(g^n) = n f(g) for |n| <= max-n (cyclic patterns only)
    Pseudo {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 6)]
        max_n: i64,
    },
    /// Elements of the built-in unbounded-defect witness families
    Witness {
        /// f1 = free-group family for a1^2; f2 = Z_m * Z_n family for "ab"
        #[arg(long, value_enum)]
        family: WitnessName,
        #[arg(long)]
        i: u32,
        /// With --j, emit the two-index witness element instead of b_i
        #[arg(long)]
        j: Option<u32>,
        /// Moduli for the f2 family
        #[arg(short, long, default_value_t = 4)]
        m: u32,
        #[arg(short, long, default_value_t = 4)]
        n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessName {
    F1,
    F2,
}

fn run_qc(cmd: QcCmd) -> Result<(Value, ExitCode), String> {
    match cmd {
        QcCmd::Eval { pattern, g } => {
            let qc = pattern.build()?;
            let g = pattern.group.parse_word(&g)?;
            let v = qc.evaluate(&g).map_err(|e| e.to_string())?;
            Ok((json!({"value": v}), ExitCode::SUCCESS))
        }
        QcCmd::Image { pattern, samples, seed } => {
            let qc = pattern.build()?;
            let report = qc.coboundary_image(samples, seed).map_err(|e| e.to_string())?;
            Ok((serde_json::to_value(&report).expect("report serializes"), ExitCode::SUCCESS))
        }
        QcCmd::Pseudo { pattern, g, max_n } => {
            let qc = pattern.build()?;
            let g = pattern.group.parse_word(&g)?;
            let holds = qc.pseudo_power_check(&g, max_n).map_err(|e| e.to_string())?;
            let code = if holds { ExitCode::SUCCESS } else { ExitCode::from(1) };
            Ok((json!({"holds": holds, "max_n": max_n}), code))
        }
        QcCmd::Witness { family, i, j, m, n } => {
            let fam = match family {
                WitnessName::F1 => WitnessFamily::F1Free,
                WitnessName::F2 => WitnessFamily::F2Fp { m, n },
            };
            let element = match j {
                None => fam.element(i).map_err(|e| e.to_string())?,
                Some(j) => fam.witness_element(i, j).map_err(|e| e.to_string())?,
            };
            let qc = fam.pattern().map_err(|e| e.to_string())?;
            let value = qc.evaluate(&element).map_err(|e| e.to_string())?;
            Ok((
                json!({"element": encode_word(&element), "value": value}),
                ExitCode::SUCCESS,
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// cocycle
// ---------------------------------------------------------------------------

#[derive(Subcommand)]
enum CocycleCmd {
    /// Evaluate the cocycle at a pair of group elements
    Eval {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Seeded audit of the 2-cocycle identity and normalization
    Verify {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Seeded audit of the central inverse symmetry h(g, g^-1) = h(g^-1, g)
    Symmetry {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn report_output(report: &AuditReport) -> (Value, ExitCode) {
    let code =
        if report.clean() { ExitCode::SUCCESS } else { ExitCode::from(1) };
    (serde_json::to_value(report).expect("report serializes"), code)
}

fn run_cocycle(cmd: CocycleCmd) -> Result<(Value, ExitCode), String> {
    match cmd {
        CocycleCmd::Eval { cocycle, x, y } => {
            let h = cocycle.build()?;
            let x = encode::parse_element(h.group(), &x).map_err(|e| e.to_string())?;
            let y = encode::parse_element(h.group(), &y).map_err(|e| e.to_string())?;
            let v = h.eval(&x, &y);
            Ok((json!({"value": encode::coeff_to_value(&v)}), ExitCode::SUCCESS))
        }
        CocycleCmd::Verify { cocycle, samples, seed } => {
            let h = cocycle.build()?;
            Ok(report_output(&h.verify_identity(samples, seed)))
        }
        CocycleCmd::Symmetry { cocycle, samples, seed } => {
            let h = cocycle.build()?;
            Ok(report_output(&h.inverse_symmetry_audit(samples, seed)))
        }
    }
}

// ---------------------------------------------------------------------------
// sl2
// ---------------------------------------------------------------------------

#[derive(Subcommand)]
enum Sl2Cmd {
    /// Sign cocycle h(m1, m2) (values in {-1, 0, 1})
    Asai {
        #[arg(long, allow_hyphen_values = true)]
        m1: String,
        #[arg(long, allow_hyphen_values = true)]
        m2: String,
    },
    /// Matsumoto's symbol cocycle H(m1, m2)
    Matsumoto {
        #[arg(long, allow_hyphen_values = true)]
        m1: String,
        #[arg(long, allow_hyphen_values = true)]
        m2: String,
    },
    /// The rational splitting function f with delta f = sign cocycle
    SplitF {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Euclidean S/T-word decomposition of an integral matrix
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Evaluate an S/T word, e.g. "S T^-3 S"
    Eval {
        #[arg(long)]
        word: String,
    },
    /// Principal-congruence membership mod N and abelianization class
    Congruence {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        modulus: u64,
    },
    /// Hyperbolic test matrix from digit spacings (requires spacing >= 2)
    Lemma {
        #[arg(long, allow_hyphen_values = true)]
        ai: i64,
        #[arg(long, allow_hyphen_values = true)]
        di: i64,
        #[arg(long, allow_hyphen_values = true)]
        aj: i64,
        #[arg(long, allow_hyphen_values = true)]
        dj: i64,
    },
    /// Seeded audit of the Chevalley generator relations for Sp(2n)
    Chevalley {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run_sl2(cmd: Sl2Cmd) -> Result<(Value, ExitCode), String> {
    let parse = |s: &str| encode::parse_mat2(s).map_err(|e| e.to_string());
    let out = match cmd {
        Sl2Cmd::Asai { m1, m2 } => {
            let (a, b) = (parse(&m1)?, parse(&m2)?);
            json!({"value": asai_h(&a, &b)})
        }
        Sl2Cmd::Matsumoto { m1, m2 } => {
            let (a, b) = (parse(&m1)?, parse(&m2)?);
            json!({"value": matsumoto_h(&a, &b).map_err(|e| e.to_string())?})
        }
        Sl2Cmd::SplitF { m } => {
            let v = asai_split_f(&parse(&m)?).map_err(|e| e.to_string())?;
            json!({"value": encode::rational_str(&v)})
        }
        Sl2Cmd::Decompose { m } => {
            let w = st_decompose(&parse(&m)?).map_err(|e| e.to_string())?;
            json!({"word": encode::encode_st_word(&w)})
        }
        Sl2Cmd::Eval { word } => {
            let w = encode::parse_st_word(&word).map_err(|e| e.to_string())?;
            json!({"matrix": encode::mat2_to_value(&w.eval())})
        }
        Sl2Cmd::Congruence { m, modulus } => {
            let data = congruence_data(&parse(&m)?, modulus).map_err(|e| e.to_string())?;
            json!({
                "in_gamma": data.in_gamma,
                "abelianization_class": data.abelianization_class,
            })
        }
        Sl2Cmd::Lemma { ai, di, aj, dj } => {
            let m = lemma_matrix(ai, di, aj, dj).map_err(|e| e.to_string())?;
            json!({
                "matrix": encode::mat2_to_value(&m),
                "h_self": asai_h(&m, &m),
                "abelianization_class": abelianization_class(&m).map_err(|e| e.to_string())?,
            })
        }
        Sl2Cmd::Chevalley { n, samples, seed } => {
            let report = chevalley_audit(n, samples, seed).map_err(|e| e.to_string())?;
            return Ok(report_output(&report));
        }
    };
    Ok((out, ExitCode::SUCCESS))
}

// ---------------------------------------------------------------------------
// steinberg
// ---------------------------------------------------------------------------

#[derive(Subcommand)]
enum SteinbergCmd {
    /// Evaluate a symbol at a pair of nonzero rationals
    Eval {
        #[arg(long, value_enum)]
        symbol: SymbolName,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Seeded audit of the defining relations (core) or their consequences
    Audit {
        #[arg(long, value_enum)]
        symbol: SymbolName,
        /// Which relation suite to audit
        #[arg(long, value_enum, default_value_t = SteinbergSuite::Core)]
        suite: SteinbergSuite,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Symbol vanishing on sums of <= terms squares
    Squares {
        #[arg(long, value_enum)]
        symbol: SymbolName,
        #[arg(long, default_value_t = 4)]
        terms: u32,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The fixed non-bimultiplicativity probe at x = y = z = -1
    Probe {
        #[arg(long, value_enum)]
        symbol: SymbolName,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SteinbergSuite {
    Core,
    Derived,
}

fn run_steinberg(cmd: SteinbergCmd) -> Result<(Value, ExitCode), String> {
    match cmd {
        SteinbergCmd::Eval { symbol, x, y } => {
            let s = symbol.build();
            let x = parse_nonzero_rational(&x)?;
            let y = parse_nonzero_rational(&y)?;
            Ok((json!({"value": s.eval(&x, &y)}), ExitCode::SUCCESS))
        }
        SteinbergCmd::Audit { symbol, suite, samples, seed } => {
            let s = symbol.build();
            let report = match suite {
                SteinbergSuite::Core => audit_core(&s, samples, seed),
                SteinbergSuite::Derived => audit_derived(&s, samples, seed),
            };
            Ok(report_output(&report))
        }
        SteinbergCmd::Squares { symbol, terms, samples, seed } => {
            let report = squares_check(&symbol.build(), terms, samples, seed);
            Ok(report_output(&report))
        }
        SteinbergCmd::Probe { symbol } => {
            let (combined, split_sum) = bimultiplicativity_probe(&symbol.build());
            Ok((
                json!({
                    "combined": combined,
                    "split_sum": split_sum,
                    "bimultiplicative": combined == split_sum,
                }),
                ExitCode::SUCCESS,
            ))
        }
    }
}

fn parse_nonzero_rational(s: &str) -> Result<BigRational, String> {
    let v = encode::parse_rational(s).map_err(|e| e.to_string())?;
    if num::Zero::is_zero(&v) {
        return Err("symbol arguments must be nonzero".to_string());
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// ext
// ---------------------------------------------------------------------------

#[derive(Subcommand)]
enum ExtCmd {
    /// Multiply two extension elements
    Mul {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Invert an extension element
    Inv {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long)]
        x: String,
    },
    /// Raise an extension element to an integer power
    Pow {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        exp: i64,
    },
    /// Seeded audit of the group axioms in the extension
    Verify {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run_ext(cmd: ExtCmd) -> Result<(Value, ExitCode), String> {
    match cmd {
        ExtCmd::Mul { cocycle, x, y } => {
            let ext = ExtGroup::new(cocycle.build()?);
            let x = encode::parse_ext_element(ext.base(), &x).map_err(|e| e.to_string())?;
            let y = encode::parse_ext_element(ext.base(), &y).map_err(|e| e.to_string())?;
            let z = ext.mul(&x, &y).map_err(|e| e.to_string())?;
            Ok((encode::ext_to_value(&z), ExitCode::SUCCESS))
        }
        ExtCmd::Inv { cocycle, x } => {
            let ext = ExtGroup::new(cocycle.build()?);
            let x = encode::parse_ext_element(ext.base(), &x).map_err(|e| e.to_string())?;
            let z = ext.inv(&x).map_err(|e| e.to_string())?;
            Ok((encode::ext_to_value(&z), ExitCode::SUCCESS))
        }
        ExtCmd::Pow { cocycle, x, exp } => {
            let ext = ExtGroup::new(cocycle.build()?);
            let x = encode::parse_ext_element(ext.base(), &x).map_err(|e| e.to_string())?;
            let z = ext.pow(&x, exp).map_err(|e| e.to_string())?;
            Ok((encode::ext_to_value(&z), ExitCode::SUCCESS))
        }
        ExtCmd::Verify { cocycle, samples, seed } => {
            let ext = ExtGroup::new(cocycle.build()?);
            Ok(report_output(&group_axioms_audit(&ext, samples, seed)))
        }
    }
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, ValueEnum)]
enum CoeffDomain {
    /// Require an integer splitting
    #[value(name = "Z", alias = "z")]
    Z,
    /// Allow a rational splitting
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Subcommand)]
enum SplitCmd {
    /// Certify splitness of a cocycle on the Cayley ball of given radius
    Certify {
        #[command(flatten)]
        cocycle: CocycleArgs,
        /// Comma-separated generators (top-level commas only), e.g. "S,T"
        #[arg(long)]
        gens: String,
        #[arg(long)]
        radius: u32,
        #[arg(long, value_enum)]
        coeff: CoeffDomain,
    },
    /// Enumerate the Cayley ball of the cocycle's base group
    Ball {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long)]
        gens: String,
        #[arg(long)]
        radius: u32,
    },
    /// First thick pair among the f1 witness elements b_1..b_count for the
    /// predicate f_{a1^2}(g) = 1
    ThickPair {
        #[arg(long, default_value_t = 6)]
        count: u32,
    },
}

/// Splits on commas at bracket depth zero, so JSON matrices survive.
fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' | '{' => depth += 1,
            ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

fn parse_gens(group: &Group, gens: &str) -> Result<Vec<Element>, String> {
    let parts = split_top_level(gens);
    if parts.is_empty() {
        return Err("no generators given".to_string());
    }
    parts
        .iter()
        .map(|p| encode::parse_element(group, p).map_err(|e| e.to_string()))
        .collect()
}

fn verdict_output(verdict: &SplitVerdict, gens: &[Element]) -> (Value, ExitCode) {
    match verdict {
        SplitVerdict::Split { assignment } => {
            let rows: Vec<Value> = assignment
                .iter()
                .map(|(g, f)| {
                    json!({
                        "g": encode::encode_element(g),
                        "f": f.iter().map(|r| encode::rational_str(r)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            (json!({"verdict": "Split", "assignment": rows}), ExitCode::SUCCESS)
        }
        SplitVerdict::NonSplit { cert } => {
            let relation = cert
                .relation
                .iter()
                .map(|&(gi, sign)| {
                    let g = encode::encode_element(&gens[gi]);
                    if sign >= 0 {
                        g
                    } else {
                        format!("{g}^-1")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ");
            (
                json!({
                    "verdict": "NonSplit",
                    "certificate": {
                        "relation": relation,
                        "constraint": {
                            "coeffs": cert.coeffs.iter().map(encode_bigint).collect::<Vec<_>>(),
                            "rhs": encode_bigint(&cert.rhs),
                        },
                        "coordinate": cert.coordinate,
                    },
                }),
                ExitCode::from(1),
            )
        }
        SplitVerdict::Inconclusive { reason } => {
            (json!({"verdict": "Inconclusive", "reason": reason}), ExitCode::SUCCESS)
        }
    }
}

fn encode_bigint(b: &num::BigInt) -> Value {
    match i64::try_from(b) {
        Ok(v) => json!(v),
        Err(_) => json!(b.to_string()),
    }
}

fn run_split(cmd: SplitCmd) -> Result<(Value, ExitCode), String> {
    match cmd {
        SplitCmd::Certify { cocycle, gens, radius, coeff } => {
            let h = cocycle.build()?;
            let gens = parse_gens(h.group(), &gens)?;
            let domain = match coeff {
                CoeffDomain::Z => SplitDomain::Integers,
                CoeffDomain::Q => SplitDomain::Rationals,
            };
            let verdict = certify_split(&h, &gens, radius, domain).map_err(|e| e.to_string())?;
            Ok(verdict_output(&verdict, &gens))
        }
        SplitCmd::Ball { cocycle, gens, radius } => {
            let h = cocycle.build()?;
            let gens = parse_gens(h.group(), &gens)?;
            let ball =
                CayleyBall::build(h.group(), &gens, radius).map_err(|e| e.to_string())?;
            let elements: Vec<String> =
                ball.elements().iter().map(encode::encode_element).collect();
            Ok((json!({"size": ball.len(), "elements": elements}), ExitCode::SUCCESS))
        }
        SplitCmd::ThickPair { count } => {
            let family = WitnessFamily::F1Free;
            let qc = family.pattern().map_err(|e| e.to_string())?;
            let group = Group::Free { rank: 2 };
            let sequence: Result<Vec<Element>, String> = (1..=count)
                .map(|i| {
                    family
                        .element(i)
                        .map(|w| match w {
                            Word::Free(v) => Element::Free(v),
                            Word::Fp(v) => Element::Fp(v),
                        })
                        .map_err(|e| e.to_string())
                })
                .collect();
            let sequence = sequence?;
            let pred = |e: &Element| match e {
                Element::Free(w) => qc.evaluate(&Word::Free(w.clone())) == Ok(1),
                _ => false,
            };
            let found =
                thick_pair(&group, &sequence, &pred).map_err(|e| e.to_string())?;
            match found {
                Some((i, j)) => {
                    let d = group
                        .mul(&sequence[i - 1], &group.inv(&sequence[j - 1]).unwrap())
                        .map_err(|e| e.to_string())?;
                    Ok((
                        json!({
                            "pair": [i, j],
                            "difference": encode::encode_element(&d),
                        }),
                        ExitCode::SUCCESS,
                    ))
                }
                None => Ok((json!({"pair": null}), ExitCode::from(1))),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// braid
// ---------------------------------------------------------------------------

#[derive(Subcommand)]
enum BraidCmd {
    /// A-part difference of the two sides of the lifted braid relation
    Discrepancy {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k1: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k2: i64,
    },
    /// The lifted full twist (sigma1 sigma2)^6
    FullTwist {
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k1: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k2: i64,
    },
    /// Cocycle telescope h(V^k, V) for V = TU, k = 1..max
    Telescope {
        #[arg(long, default_value_t = 5)]
        max: u32,
    },
    /// Audit of the mod-n induced splitting witness F(x) = (0, pi(x)) x^-1
    SplitWitness {
        #[arg(long)]
        modulus: u64,
        #[arg(long, default_value_t = 200)]
        pairs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run_braid(cmd: BraidCmd) -> Result<(Value, ExitCode), String> {
    match cmd {
        BraidCmd::Discrepancy { k1, k2 } => {
            let d = braid_discrepancy(k1, k2);
            Ok((json!({"value": encode_bigint(&d)}), ExitCode::SUCCESS))
        }
        BraidCmd::FullTwist { k1, k2 } => {
            let tw = full_twist_center(k1, k2);
            Ok((encode::ext_to_value(&tw), ExitCode::SUCCESS))
        }
        BraidCmd::Telescope { max } => {
            let h = asai_cocycle();
            let v = Element::Mat(Mat2::t().mul(&Mat2::u()));
            let values =
                power_telescope(&h, &v, max).map_err(|e| e.to_string())?;
            let rows: Vec<Value> = values.iter().map(encode::coeff_to_value).collect();
            Ok((json!({"values": rows}), ExitCode::SUCCESS))
        }
        BraidCmd::SplitWitness { modulus, pairs, seed } => {
            if modulus < 2 {
                return Err(format!("modulus must be at least 2, got {modulus}"));
            }
            Ok(report_output(&induced_mod_split_witness(modulus, pairs, seed)))
        }
    }
}

// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(Value, ExitCode), String> {
    match cli.cmd {
        Cmd::Words(c) => run_words(c),
        Cmd::Qc(c) => run_qc(c),
        Cmd::Cocycle(c) => run_cocycle(c),
        Cmd::Sl2(c) => run_sl2(c),
        Cmd::Steinberg(c) => run_steinberg(c),
        Cmd::Ext(c) => run_ext(c),
        Cmd::Split(c) => run_split(c),
        Cmd::Braid(c) => run_braid(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((value, code)) => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // A consumer like `head` may close the pipe early; the verdict
            // (exit code) still stands.
            if let Err(e) = writeln!(out, "{value}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            code
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

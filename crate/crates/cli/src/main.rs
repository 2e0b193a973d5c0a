mod session;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abac_chain::abac::{AbacError, AccountId, Action, ActionFlags, AttributeSet, Policy, TimeContext, UnixTime};
use abac_chain::chain::{CallOutput, ChainError, TxError, TxOutcome};
use abac_chain::contracts::{Call, ContractError, ContractKind};
use abac_chain::eval::{self, EvalError, EvalMode, ExperimentConfig, Sharing};
use abac_chain::gas::{tx_fee, CostParams, DeployConstants, GasError, SearchMode};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rust_decimal::Decimal;
use serde_json::Value;

use session::{Session, StateLocked};

const DEFAULT_SENDER: &str = "0xad01000000000000000000000000000000000000";

#[derive(Parser)]
#[command(name = "abac-chain", version, about = "Attribute-based access control on a simulated smart-contract chain")]
struct Cli {
    /// Transaction log backing the chain state.
    #[arg(long, global = true, env = "ABAC_CHAIN_STATE", default_value = "abac-chain.log")]
    state: PathBuf,
    /// Account that signs transactions.
    #[arg(long, global = true, env = "ABAC_CHAIN_SENDER", default_value = DEFAULT_SENDER)]
    sender: AccountId,
    /// Timestamp for the transaction; defaults to the chain clock.
    #[arg(long, global = true)]
    now: Option<UnixTime>,
    /// Execute and report gas without saving the new state.
    #[arg(long, global = true)]
    dry_run: bool,
    #[command(flatten)]
    pricing: Pricing,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pricing {
    /// Gas price in Gwei.
    #[arg(long, global = true, default_value_t = 8)]
    gas_price: u64,
    #[arg(long, global = true, default_value = "132.00")]
    usd_per_ether: Decimal,
}

#[derive(Subcommand)]
enum Command {
    /// Deploy SAMC, OAMC, PMC and ACC.
    Deploy,
    /// Manage subject attributes.
    #[command(subcommand)]
    Subject(RecordCmd),
    /// Manage object attributes.
    #[command(subcommand)]
    Object(RecordCmd),
    /// Manage policies.
    #[command(subcommand)]
    Policy(PolicyCmd),
    /// Request access through ACC.
    Access(AccessArgs),
    /// Cost experiments, written as CSV.
    #[command(subcommand)]
    Cost(CostCmd),
}

#[derive(Subcommand)]
enum RecordCmd {
    /// Add or merge attributes given as name=value.
    Add { id: AccountId, attrs: Vec<String> },
    Update { id: AccountId, name: String, value: String },
    Delete { id: AccountId, name: String },
    /// Print the stored record.
    Get { id: AccountId },
}

#[derive(Args)]
struct PolicySpec {
    /// JSON file holding `{"policy": ...}` or a bare policy.
    #[arg(long, conflicts_with_all = ["sa", "oa"])]
    file: Option<PathBuf>,
    /// Subject attribute name=value; an empty value is a wildcard.
    #[arg(long)]
    sa: Vec<String>,
    /// Object attribute name=value; an empty value is a wildcard.
    #[arg(long)]
    oa: Vec<String>,
    #[arg(long)]
    read: bool,
    #[arg(long)]
    write: bool,
    #[arg(long)]
    execute: bool,
    /// 0 for no time limit, 1 for the [start, end] window.
    #[arg(long, default_value_t = 0)]
    mode: u8,
    #[arg(long, default_value_t = 0)]
    start: UnixTime,
    #[arg(long, default_value_t = 0)]
    end: UnixTime,
}

#[derive(Subcommand)]
enum PolicyCmd {
    Add(PolicySpec),
    Update {
        index: usize,
        #[command(flatten)]
        spec: PolicySpec,
    },
    /// Delete the policy whose attributes match completely.
    Delete(PolicySpec),
    /// Indices of policies whose attributes partially match.
    Find(PolicySpec),
    /// Index of the policy whose attributes match completely.
    FindExact(PolicySpec),
    /// Print one policy, or all of them.
    Get { index: Option<usize> },
}

#[derive(Args)]
struct AccessArgs {
    #[arg(long)]
    subject: AccountId,
    #[arg(long)]
    object: AccountId,
    #[arg(long, value_enum, required = true)]
    action: Vec<ActionArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    Read,
    Write,
    Execute,
}

impl From<ActionArg> for Action {
    fn from(a: ActionArg) -> Self {
        match a {
            ActionArg::Read => Action::Read,
            ActionArg::Write => Action::Write,
            ActionArg::Execute => Action::Execute,
        }
    }
}

#[derive(Args)]
struct Bounds {
    #[arg(long, default_value_t = 6)]
    a_s: u32,
    #[arg(long, default_value_t = 6)]
    a_o: u32,
    #[arg(long, default_value_t = 10)]
    c_s: u32,
    #[arg(long, default_value_t = 10)]
    c_o: u32,
    /// Code cost of subjectAdd when --a-s is not 6.
    #[arg(long)]
    subject_add_code: Option<u64>,
    /// Code cost of objectAdd when --a-o is not 6.
    #[arg(long)]
    object_add_code: Option<u64>,
}

#[derive(Args)]
struct CostCommon {
    #[arg(long, value_enum, default_value = "analytic")]
    mode: ModeArg,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    bounds: Bounds,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Metered,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    PerPair,
    PerPolicy,
}

#[derive(Subcommand)]
enum CostCmd {
    /// Deployment cost of both schemes.
    Deploy(CostCommon),
    /// Cumulative operating cost against the number of pairs.
    Curve {
        /// Pairs sharing one policy.
        #[arg(long, default_value_t = 1, conflicts_with = "shared_all")]
        p: usize,
        /// All pairs share a single policy.
        #[arg(long)]
        shared_all: bool,
        #[arg(long, default_value_t = 300)]
        m_max: usize,
        #[arg(long, value_enum, default_value = "per-pair")]
        search: SearchArg,
        /// Leave deployment cost out of the cumulative columns.
        #[arg(long)]
        no_deployment: bool,
        #[command(flatten)]
        common: CostCommon,
    },
    /// Two new lights in a ten-member lab.
    Scenario1(CostCommon),
    /// Three hundred new members.
    Scenario2(CostCommon),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e:#}", error_code(&e));
            ExitCode::FAILURE
        }
    }
}

/// Stable name of the root cause, for scripts.
fn error_code(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if let Some(e) = cause.downcast_ref::<ChainError>() {
            return e.code();
        }
        if let Some(e) = cause.downcast_ref::<TxError>() {
            return e.code();
        }
        if let Some(e) = cause.downcast_ref::<ContractError>() {
            return e.code();
        }
        if let Some(e) = cause.downcast_ref::<EvalError>() {
            return e.code();
        }
        if let Some(e) = cause.downcast_ref::<GasError>() {
            return ChainError::Gas(e.clone()).code();
        }
        if cause.downcast_ref::<AbacError>().is_some() {
            return "InvalidAttribute";
        }
        if cause.downcast_ref::<StateLocked>().is_some() {
            return "StateLocked";
        }
        if cause.downcast_ref::<serde_json::Error>().is_some() {
            return "InvalidArgs";
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return "Io";
        }
    }
    "Error"
}

fn run(cli: Cli) -> Result<()> {
    let params = CostParams {
        gas_price_gwei: cli.pricing.gas_price,
        usd_per_ether: cli.pricing.usd_per_ether,
        ..CostParams::default()
    };
    match cli.command {
        Command::Cost(cmd) => cost(cmd, &params),
        Command::Subject(RecordCmd::Get { id }) | Command::Object(RecordCmd::Get { id }) => {
            let session = Session::open(&cli.state, params)?;
            let attrs = match cli.command {
                Command::Subject(_) => session.chain.subject(&id)?,
                _ => session.chain.object(&id)?,
            };
            println!("{}", serde_json::to_string_pretty(attrs)?);
            Ok(())
        }
        Command::Policy(PolicyCmd::Get { index }) => {
            let session = Session::open(&cli.state, params)?;
            let out = match index {
                Some(i) => serde_json::to_string_pretty(session.chain.policy(i)?)?,
                None => serde_json::to_string_pretty(session.chain.policies()?)?,
            };
            println!("{out}");
            Ok(())
        }
        command => {
            let mut session = Session::open(&cli.state, params)?;
            if let Some(now) = cli.now {
                session.chain.set_clock(now)?;
            }
            let result = apply(&mut session, cli.sender, command);
            // Failed transactions are logged too, so persist either way.
            session.persist(cli.dry_run)?;
            result
        }
    }
}

fn apply(session: &mut Session, sender: AccountId, command: Command) -> Result<()> {
    let chain = &mut session.chain;
    let call = match command {
        Command::Deploy => {
            let deployed = chain.deploy_abac(sender)?;
            println!("{:<6} {:<44} {:>12}", "contract", "address", "gas");
            for (kind, receipt) in &deployed {
                let address = chain.contract(kind.canonical_name()).expect("just deployed").address;
                println!("{:<6} {:<44} {:>12}", kind.canonical_name(), address, receipt.total());
            }
            let total = deployed.iter().map(|(_, r)| r.total()).sum::<u64>();
            println!("total gas: {total}");
            println!("fee: {}", tx_fee(total, chain.params()));
            return Ok(());
        }
        Command::Subject(cmd) => record_call(cmd, true)?,
        Command::Object(cmd) => record_call(cmd, false)?,
        Command::Policy(cmd) => policy_call(cmd)?,
        Command::Access(args) => {
            let actions: ActionFlags = args.action.into_iter().map(Action::from).collect();
            Call::AccessControl { subject: args.subject, object: args.object, actions }
        }
        Command::Cost(_) => unreachable!("handled without a session"),
    };
    let tx = chain.next_tx(sender, &call);
    let hash = tx.hash_hex();
    let outcome = chain.submit(tx)?;
    report(chain, &hash, &outcome);
    Ok(())
}

fn record_call(cmd: RecordCmd, subject: bool) -> Result<Call> {
    Ok(match (cmd, subject) {
        (RecordCmd::Add { id, attrs }, true) => Call::SubjectAdd { id, attrs: AttributeSet::parse_assignments(&attrs)? },
        (RecordCmd::Add { id, attrs }, false) => Call::ObjectAdd { id, attrs: AttributeSet::parse_assignments(&attrs)? },
        (RecordCmd::Update { id, name, value }, true) => Call::SubjectUpdate { id, name, value },
        (RecordCmd::Update { id, name, value }, false) => Call::ObjectUpdate { id, name, value },
        (RecordCmd::Delete { id, name }, true) => Call::SubjectDelete { id, name },
        (RecordCmd::Delete { id, name }, false) => Call::ObjectDelete { id, name },
        (RecordCmd::Get { .. }, _) => unreachable!("views are handled without a transaction"),
    })
}

fn policy_call(cmd: PolicyCmd) -> Result<Call> {
    Ok(match cmd {
        PolicyCmd::Add(spec) => Call::PolicyAdd { policy: spec.policy()? },
        PolicyCmd::Update { index, spec } => Call::PolicyUpdate { index, policy: spec.policy()? },
        PolicyCmd::Delete(spec) => Call::PolicyDelete { policy: spec.policy()? },
        PolicyCmd::Find(spec) => {
            let p = spec.policy()?;
            Call::FindMatchPolicy { sa: p.sa, oa: p.oa }
        }
        PolicyCmd::FindExact(spec) => {
            let p = spec.policy()?;
            Call::FindExactMatchPolicy { sa: p.sa, oa: p.oa }
        }
        PolicyCmd::Get { .. } => unreachable!("views are handled without a transaction"),
    })
}

impl PolicySpec {
    fn policy(&self) -> Result<Policy> {
        if let Some(path) = &self.file {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let mut value: Value = serde_json::from_str(&text)?;
            if let Some(inner) = value.get_mut("policy") {
                value = inner.take();
            }
            return Ok(serde_json::from_value(value)?);
        }
        let context = TimeContext { mode: self.mode, start_time: self.start, end_time: self.end };
        Ok(Policy {
            sa: AttributeSet::parse_assignments(&self.sa)?,
            oa: AttributeSet::parse_assignments(&self.oa)?,
            actions: ActionFlags::new(self.read, self.write, self.execute),
            context,
        })
    }
}

fn report(chain: &abac_chain::chain::Chain, hash: &str, outcome: &TxOutcome) {
    match &outcome.output {
        CallOutput::Access(access) => {
            let acc = chain.contract(ContractKind::Acc.canonical_name()).expect("flow ran on ACC");
            let record = chain.access_records().ok().and_then(|r| r.last());
            println!("ACC address: {}", acc.address);
            println!("request hash: {hash}");
            if let Some(r) = record {
                println!("subject: {}", r.subject);
                println!("object: {}", r.object);
                println!("timestamp: {}", r.now);
            }
            println!("result: {}", access.decision.permitted);
            println!("reason: {}", access.decision.reason);
            println!("steps:");
            for s in &access.steps {
                println!("  {:<16} {:>8}", s.step.abi(), s.receipt.total());
            }
        }
        CallOutput::Updated { value } => println!("stored: {value}"),
        CallOutput::PolicyAdded { index } => println!("policy index: {index}"),
        CallOutput::PolicyRemoved { index } => println!("removed index: {index}"),
        CallOutput::Matches { indices } => println!("matches: {indices:?}"),
        CallOutput::ExactMatch { index: Some(i) } => println!("exact match: {i}"),
        CallOutput::ExactMatch { index: None } => println!("exact match: none"),
        CallOutput::Deployed { contract, address } => println!("deployed {contract} at {address}"),
        CallOutput::Done => {}
    }
    println!("tx hash: {hash}");
    println!("gas: {}", outcome.receipt.total());
    println!("fee: {}", tx_fee(outcome.receipt.total(), chain.params()));
}

fn cost(cmd: CostCmd, pricing: &CostParams) -> Result<()> {
    let with_bounds = |b: &Bounds| CostParams {
        a_s: b.a_s,
        a_o: b.a_o,
        c_s: b.c_s,
        c_o: b.c_o,
        subject_add_code: b.subject_add_code,
        object_add_code: b.object_add_code,
        ..pricing.clone()
    };
    let mode = |m: ModeArg| match m {
        ModeArg::Analytic => EvalMode::Analytic,
        ModeArg::Metered => EvalMode::Metered,
    };
    let deploy = DeployConstants::default();
    let (csv, out) = match cmd {
        CostCmd::Deploy(c) => {
            let report = eval::deployment_report(&with_bounds(&c.bounds), &deploy, mode(c.mode))?;
            (report.to_csv_string(), c.out)
        }
        CostCmd::Curve { p, shared_all, m_max, search, no_deployment, common } => {
            let sharing = if shared_all { Sharing::SharedAll } else { Sharing::PerPolicy(p) };
            let cfg = ExperimentConfig {
                m_max,
                sharing,
                mode: mode(common.mode),
                search_mode: match search {
                    SearchArg::PerPair => SearchMode::PerPair,
                    SearchArg::PerPolicy => SearchMode::PerPolicy,
                },
                params: with_bounds(&common.bounds),
                deploy,
                include_deployment: !no_deployment,
            };
            (eval::operating_curve(&cfg)?.to_csv_string(), common.out)
        }
        CostCmd::Scenario1(c) => (eval::scenario1(&with_bounds(&c.bounds), &deploy, mode(c.mode))?.to_csv_string(), c.out),
        CostCmd::Scenario2(c) => (eval::scenario2(&with_bounds(&c.bounds), &deploy, mode(c.mode))?.to_csv_string(), c.out),
    };
    emit(&csv, out.as_deref())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

use std::io::{self, Write};

use rust_decimal::Decimal;
use serde::Serialize;

use crate::gas::{tx_fee, CostParams};
use crate::Gas;

/// USD columns are printed to this many decimal places.
pub const USD_DP: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CostRow {
    pub m: usize,
    pub proposed_gas: Gas,
    pub acl_gas: Gas,
    pub proposed_usd: Decimal,
    pub acl_usd: Decimal,
}

impl CostRow {
    pub fn new(m: usize, proposed_gas: Gas, acl_gas: Gas, params: &CostParams) -> Self {
        Self {
            m,
            proposed_gas,
            acl_gas,
            proposed_usd: tx_fee(proposed_gas, params).usd,
            acl_usd: tx_fee(acl_gas, params).usd,
        }
    }

    pub fn diff(&self) -> i128 {
        i128::from(self.proposed_gas) - i128::from(self.acl_gas)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverKind {
    ProposedBelowAcl,
    ProposedAboveAcl,
}

impl CrossoverKind {
    pub fn label(self) -> &'static str {
        match self {
            CrossoverKind::ProposedBelowAcl => "proposed_below_acl",
            CrossoverKind::ProposedAboveAcl => "proposed_above_acl",
        }
    }
}

/// `m` is the first pair count on the new side of the sign change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossover {
    pub kind: CrossoverKind,
    pub m: usize,
}

/// Sign changes of `proposed - acl` along the rows, starting from `baseline`
/// (the difference before any pair). Zero differences keep the previous sign.
pub fn find_crossovers(baseline: i128, rows: &[CostRow]) -> Vec<Crossover> {
    let mut sign = baseline.signum();
    let mut out = Vec::new();
    for row in rows {
        let s = row.diff().signum();
        if s == 0 {
            continue;
        }
        if sign != 0 && s != sign {
            let kind = if s < 0 { CrossoverKind::ProposedBelowAcl } else { CrossoverKind::ProposedAboveAcl };
            out.push(Crossover { kind, m: row.m });
        }
        sign = s;
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub rows: Vec<CostRow>,
    pub crossovers: Vec<Crossover>,
}

impl CostReport {
    pub fn row(&self, m: usize) -> Option<&CostRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    pub fn first(&self, kind: CrossoverKind) -> Option<usize> {
        self.crossovers.iter().find(|c| c.kind == kind).map(|c| c.m)
    }

    /// CSV with a header row, then one `# crossover` comment line per crossover.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["m", "proposed_gas", "acl_gas", "proposed_usd", "acl_usd"])?;
            for r in &self.rows {
                w.write_record([
                    r.m.to_string(),
                    r.proposed_gas.to_string(),
                    r.acl_gas.to_string(),
                    crate::gas::round(r.proposed_usd, USD_DP).to_string(),
                    crate::gas::round(r.acl_usd, USD_DP).to_string(),
                ])?;
            }
            w.flush()?;
        }
        for c in &self.crossovers {
            writeln!(out, "# crossover {} m={}", c.kind.label(), c.m)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

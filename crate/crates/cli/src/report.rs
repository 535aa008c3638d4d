use boardgraph_core::analytics::{gender_power, influence_by_country, tenure_summary};
use boardgraph_core::graph::company_interlocks;
use boardgraph_core::model::INF_COMPLETE_YEARS;
use boardgraph_core::{FilterSpec, Snapshot};
use clap::ValueEnum;

use crate::Failure;

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Tenure,
    Influence,
    Gender,
    Interlocks,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn num(v: f64, places: usize) -> String {
    format!("{v:.places$}")
}

fn opt(v: Option<f64>, places: usize) -> String {
    v.map(|x| num(x, places)).unwrap_or_default()
}

/// Rows follow the sort order of the underlying query.
pub fn build(snap: &Snapshot, kind: Kind, filter: &FilterSpec, min: usize) -> Result<Table, Failure> {
    Ok(match kind {
        Kind::Tenure => {
            let summary = tenure_summary(snap, filter);
            let mut rows = Vec::new();
            for (league, cell) in &summary.per_league {
                rows.push(vec![
                    league.as_str().to_string(),
                    "(all)".to_string(),
                    num(cell.mean_tenure, 4),
                    cell.seat_count.to_string(),
                ]);
                for s in summary.per_league_sector.iter().filter(|s| s.league == *league) {
                    rows.push(vec![
                        league.as_str().to_string(),
                        s.sector.clone(),
                        num(s.mean_tenure, 4),
                        s.seat_count.to_string(),
                    ]);
                }
            }
            Table {
                headers: vec!["league", "sector", "mean_tenure", "seat_count"],
                rows,
            }
        }
        Kind::Influence => {
            let headers = vec![
                "country",
                "name",
                "mean_inf",
                "seat_count",
                "inf_2018",
                "inf_2019",
                "inf_2020",
                "inf_2021",
            ];
            let rows = influence_by_country(snap, filter)
                .into_iter()
                .map(|c| {
                    let mut row = vec![
                        c.country.clone(),
                        c.name.clone(),
                        opt(c.mean_inf, 4),
                        c.seat_count.to_string(),
                    ];
                    for year in INF_COMPLETE_YEARS {
                        row.push(opt(
                            c.trend.iter().find(|p| p.year == year).map(|p| p.mean_inf),
                            4,
                        ));
                    }
                    row
                })
                .collect();
            Table { headers, rows }
        }
        Kind::Gender => Table {
            headers: vec![
                "country",
                "name",
                "seat_share_female",
                "inf_share_female",
                "power_gap",
                "seat_count",
            ],
            rows: gender_power(snap, filter)
                .into_iter()
                .map(|g| {
                    vec![
                        g.country,
                        g.name,
                        num(g.seat_share_female, 4),
                        num(g.inf_share_female, 4),
                        num(g.power_gap, 4),
                        g.seat_count.to_string(),
                    ]
                })
                .collect(),
        },
        Kind::Interlocks => {
            if !filter.is_unrestricted() {
                return Err(Failure::Usage(
                    "the interlocks report does not take filters".into(),
                ));
            }
            let name = |id| snap.company(id).map(|c| c.name.clone()).unwrap_or_default();
            let rows = company_interlocks(snap, min)
                .map_err(|e| Failure::Usage(e.to_string()))?
                .into_iter()
                .map(|i| {
                    vec![
                        i.company_a.to_string(),
                        name(i.company_a),
                        i.company_b.to_string(),
                        name(i.company_b),
                        i.count.to_string(),
                        i.shared_directors
                            .iter()
                            .map(|d| d.to_string())
                            .collect::<Vec<_>>()
                            .join(";"),
                    ]
                })
                .collect();
            Table {
                headers: vec![
                    "company_a",
                    "company_a_name",
                    "company_b",
                    "company_b_name",
                    "count",
                    "shared_directors",
                ],
                rows,
            }
        }
    })
}

impl Table {
    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Failure::Data(e.into());
                w.write_record(&self.headers).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::Data(anyhow::anyhow!("{e}")))?;
                String::from_utf8(bytes).map_err(|e| Failure::Data(e.into()))
            }
            Format::Text => {
                let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect();
                    format!("{}\n", padded.join("  ").trim_end())
                };
                let mut out = line(self.headers.clone());
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                out.push_str(&line(rule.iter().map(String::as_str).collect()));
                for row in &self.rows {
                    out.push_str(&line(row.iter().map(String::as_str).collect()));
                }
                if self.rows.is_empty() {
                    out.push_str("(no rows)\n");
                }
                Ok(out)
            }
        }
    }
}

//! Rendering census tables as CSV or JSON.

use serde::Serialize;
use serde_json::json;

use crate::arith::Species;
use crate::census::{pattern_label, CensusTables, GroupTally, ItemTally, TableId};
use crate::error::{Error, Result};
use crate::pftype::PfType;
use crate::rank::TheoremItem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

/// Denominator a percentage refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PercentBase {
    AllFields,
    Table,
    Item,
    CompleteMultiplets,
}

impl PercentBase {
    pub fn name(self) -> &'static str {
        match self {
            PercentBase::AllFields => "all_fields",
            PercentBase::Table => "table",
            PercentBase::Item => "item",
            PercentBase::CompleteMultiplets => "complete_multiplets",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Doublets {
    pub complete: u64,
    pub pseudo: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub item: String,
    pub shape: String,
    pub ty: String,
    pub count: u64,
    /// Two decimals, rounded half up.
    pub percent: String,
    pub percent_base: PercentBase,
    pub paradigms: Vec<u64>,
    pub doublets: Doublets,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub id: TableId,
    pub rows: Vec<Row>,
}

/// `100·count/base` to two decimals, half up, in integer arithmetic.
pub fn percent(count: u64, base: u64) -> String {
    if base == 0 {
        return "0.00".into();
    }
    let scaled = (2 * count as u128 * 10_000 + base as u128) / (2 * base as u128);
    format!("{}.{:02}", scaled / 100, scaled % 100)
}

fn type_label(ty: Option<PfType>) -> &'static str {
    ty.map(PfType::name).unwrap_or("unresolved")
}

/// Types seen for an item, e.g. `beta` or `alpha|beta`.
fn item_type_label(t: &ItemTally) -> String {
    let v: Vec<&str> = t.by_type.keys().map(|&k| type_label(k)).collect();
    v.join("|")
}

fn group_row(
    item: String,
    shape: &str,
    ty: String,
    g: &GroupTally,
    base: u64,
    percent_base: PercentBase,
) -> Row {
    Row {
        item,
        shape: shape.to_string(),
        ty,
        count: g.fields.count,
        percent: percent(g.fields.count, base),
        percent_base,
        paradigms: g.fields.paradigms.as_slice().to_vec(),
        doublets: Doublets {
            complete: g.multiplets.complete,
            pseudo: g.multiplets.pseudo,
        },
    }
}

fn item_table(t: &CensusTables, items: &[TheoremItem]) -> Vec<Row> {
    let tallies: Vec<ItemTally> = items.iter().map(|&i| t.item(i)).collect();
    let total: u64 = tallies.iter().map(|x| x.all.fields.count).sum();
    let mut rows = Vec::new();
    let mut sum = GroupTally::default();
    for (&item, tally) in items.iter().zip(&tallies) {
        rows.push(group_row(
            item.code(),
            item.shape(),
            item_type_label(tally),
            &tally.all,
            total,
            PercentBase::Table,
        ));
        for (variant, g) in &tally.variants {
            rows.push(group_row(
                item.code(),
                variant,
                item_type_label(tally),
                g,
                tally.all.fields.count,
                PercentBase::Item,
            ));
        }
        sum.fields.count += tally.all.fields.count;
        sum.multiplets.complete += tally.all.multiplets.complete;
        sum.multiplets.pseudo += tally.all.multiplets.pseudo;
    }
    rows.push(group_row(
        "total".into(),
        "",
        String::new(),
        &sum,
        t.total_fields,
        PercentBase::AllFields,
    ));
    rows
}

fn species_table(t: &CensusTables) -> Vec<Row> {
    let mut rows: Vec<Row> = Species::ALL
        .iter()
        .map(|&s| {
            let g = GroupTally {
                fields: t.species.get(&s).cloned().unwrap_or_default(),
                ..Default::default()
            };
            group_row(
                s.label().into(),
                "",
                String::new(),
                &g,
                t.total_fields,
                PercentBase::AllFields,
            )
        })
        .collect();
    let mut g = GroupTally::default();
    g.fields.count = t.total_fields;
    rows.push(group_row(
        "total".into(),
        "",
        String::new(),
        &g,
        t.total_fields,
        PercentBase::AllFields,
    ));
    rows
}

fn typesplit_table(t: &CensusTables) -> Vec<Row> {
    let mut rows = Vec::new();
    let items = TheoremItem::low_rank_items().chain([TheoremItem::RankTwoOrMore]);
    for item in items {
        let tally = t.item(item);
        for (&ty, g) in &tally.by_type {
            rows.push(group_row(
                item.code(),
                item.shape(),
                type_label(ty).into(),
                g,
                tally.all.fields.count,
                PercentBase::Item,
            ));
        }
        let complete = tally.all.multiplets.complete;
        for (pattern, pt) in &tally.patterns {
            rows.push(Row {
                item: item.code(),
                shape: item.shape().into(),
                ty: pattern_label(pattern),
                count: pt.count,
                percent: percent(pt.count, complete),
                percent_base: PercentBase::CompleteMultiplets,
                paradigms: pt.paradigms.as_slice().to_vec(),
                doublets: Doublets {
                    complete: pt.count,
                    pseudo: 0,
                },
            });
        }
    }
    rows
}

pub fn build_tables(t: &CensusTables) -> Vec<Table> {
    t.tables
        .iter()
        .map(|&id| {
            let rows = if t.total_fields == 0 {
                Vec::new()
            } else {
                match id {
                    TableId::Species => species_table(t),
                    TableId::Honda => {
                        item_table(t, &(1..=5).map(TheoremItem::Honda).collect::<Vec<_>>())
                    }
                    TableId::Ismaili1 => {
                        item_table(t, &(1..=4).map(TheoremItem::Ismaili1).collect::<Vec<_>>())
                    }
                    TableId::Ismaili2 => {
                        item_table(t, &(1..=7).map(TheoremItem::Ismaili2).collect::<Vec<_>>())
                    }
                    TableId::Typesplit => typesplit_table(t),
                }
            };
            Table { id, rows }
        })
        .collect()
}

pub const CSV_HEADER: [&str; 9] = [
    "item",
    "conductor_shape",
    "type",
    "count",
    "percent",
    "paradigms",
    "doublets_complete",
    "doublets_pseudo",
    "percent_base",
];

/// One CSV document per table, as `(file name, bytes)`.
pub fn emit_csv(t: &CensusTables) -> Result<Vec<(String, Vec<u8>)>> {
    let io = |e: csv::Error| Error::Config(format!("csv: {e}"));
    build_tables(t)
        .into_iter()
        .map(|table| {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(io)?;
            for r in &table.rows {
                let paradigms: Vec<String> = r.paradigms.iter().map(u64::to_string).collect();
                w.write_record([
                    r.item.as_str(),
                    &r.shape,
                    &r.ty,
                    &r.count.to_string(),
                    &r.percent,
                    &paradigms.join(" "),
                    &r.doublets.complete.to_string(),
                    &r.doublets.pseudo.to_string(),
                    r.percent_base.name(),
                ])
                .map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Config(format!("csv: {e}")))?;
            Ok((format!("{}.csv", table.id.name()), bytes))
        })
        .collect()
}

pub fn emit_json_value(t: &CensusTables) -> serde_json::Value {
    let by_species: serde_json::Map<String, serde_json::Value> = Species::ALL
        .iter()
        .map(|&s| (s.label().to_string(), json!(t.species_count(s))))
        .collect();
    let tables: Vec<serde_json::Value> = build_tables(t)
        .into_iter()
        .map(|table| {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|r| {
                    let pct: f64 = r.percent.parse().unwrap_or(0.0);
                    json!({
                        "item": r.item,
                        "shape": r.shape,
                        "type": r.ty,
                        "count": r.count,
                        "percent": pct,
                        "percent_base": r.percent_base,
                        "paradigms": r.paradigms,
                        "doublets": r.doublets,
                    })
                })
                .collect();
            json!({ "table_id": table.id.name(), "rows": rows })
        })
        .collect();
    json!({
        "meta": {
            "max_d": t.max_d,
            "version": env!("CARGO_PKG_VERSION"),
            "conjectural_rules_used": t.conjectural_rules_used,
        },
        "totals": { "fields": t.total_fields, "by_species": by_species },
        "tables": tables,
    })
}

pub fn emit_json(t: &CensusTables, pretty: bool) -> String {
    let v = emit_json_value(t);
    let s = if pretty {
        serde_json::to_string_pretty(&v)
    } else {
        serde_json::to_string(&v)
    };
    s.expect("census JSON serializes")
}

/// Aligned plain-text rendering for terminals.
pub fn render_text(t: &CensusTables) -> String {
    let mut out = format!("fields below {}: {}\n", t.max_d, t.total_fields);
    for table in build_tables(t) {
        out.push_str(&format!("\n[{}]\n", table.id.name()));
        out.push_str(&format!(
            "{:<14} {:<32} {:<18} {:>9} {:>7}  {}\n",
            "item", "shape", "type", "count", "%", "paradigms"
        ));
        for r in &table.rows {
            let paradigms: Vec<String> = r.paradigms.iter().map(u64::to_string).collect();
            out.push_str(&format!(
                "{:<14} {:<32} {:<18} {:>9} {:>7}  {}\n",
                r.item,
                r.shape,
                r.ty,
                r.count,
                r.percent,
                paradigms.join(",")
            ));
        }
    }
    out
}

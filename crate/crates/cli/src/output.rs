use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Output of one command: a JSON payload plus a flat table of the same data
/// for CSV and plain-text emission. The seed and the config echo head every
/// format.
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub result: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn json(&self) -> String {
        let v = json!({
            "command": self.command,
            "seed": self.seed,
            "config": self.config,
            "result": self.result,
        });
        let mut out = serde_json::to_string_pretty(&v).expect("JSON values serialize");
        out.push('\n');
        out
    }

    fn header_lines(&self, prefix: &str) -> String {
        format!(
            "{prefix}command: {}\n{prefix}seed: {}\n{prefix}config: {}\n",
            self.command, self.seed, self.config
        )
    }

    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8");
        self.header_lines("# ") + &body
    }

    fn table(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = self.header_lines("");
        out.push('\n');
        out.push_str(&line(self.columns.clone()));
        out.push_str(&line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect()));
        for row in &self.rows {
            out.push_str(&line(row.iter().map(|s| s.as_str()).collect()));
        }
        out
    }
}

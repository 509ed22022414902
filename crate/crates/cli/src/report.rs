use serde::Serialize;
use serde_json::Value;

/// Exit codes of the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Inconsistent,
    InputError,
    SolverFailure,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Inconsistent => 1,
            Status::InputError => 2,
            Status::SolverFailure => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub solver: f64,
    pub cb_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Budgets {
    pub max_group_order: usize,
    pub scan_budget: u128,
    pub sdp_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub seed: u64,
    pub budgets: Budgets,
    pub output: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub arguments: Vec<String>,
    pub config: RunConfig,
    pub status: Status,
    pub exit_code: i32,
    pub error: Option<String>,
    pub assertions: Vec<Assertion>,
    pub result: Value,
    #[serde(skip)]
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(command: &str, arguments: Vec<String>, config: RunConfig) -> Self {
        Report {
            tool: "cbhom",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            arguments,
            config,
            status: Status::Ok,
            exit_code: 0,
            error: None,
            assertions: Vec::new(),
            result: Value::Null,
            summary: Vec::new(),
        }
    }

    /// Records an assertion; a failed one marks the run inconsistent.
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        if !passed && self.status == Status::Ok {
            self.status = Status::Inconsistent;
        }
        self.assertions.push(Assertion { name: name.into(), passed, detail: detail.into() });
    }

    pub fn fail(&mut self, status: Status, error: impl ToString) {
        self.status = status;
        self.error = Some(error.to_string());
    }

    pub fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    pub fn finish(mut self) -> Self {
        self.exit_code = self.status.code();
        let passed = self.assertions.iter().filter(|a| a.passed).count();
        let total = self.assertions.len();
        self.say(format!("{passed}/{total} assertions passed; status {:?} (exit {})", self.status, self.exit_code));
        if let Some(e) = &self.error {
            let e = e.clone();
            self.say(format!("error: {e}"));
        }
        self
    }
}

//! The line-oriented console shared by `repl` and `batch`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use cnl_core::session::{Item, Mode, Response, Session};

use crate::Clock;

const HELP: &str = "\
sentences are submitted as typed; a blank line starts a new paragraph
  :para              new paragraph
  :choose R I        pick reading I for pending sentence R (a bare I works when one sentence waits)
  :mode M            auto, assert, query or directive
  :tracks FILE       ingest track records
  :gen TERM          render a logical form as English
  :log               print the interaction log
  :quit              leave";

/// What the caller should do after a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

pub struct Console {
    session: Session,
    clock: Clock,
    mode: Mode,
    /// Relative `:tracks` paths resolve against this.
    base: PathBuf,
    waiting: Vec<usize>,
}

impl Console {
    pub fn new(session: Session, clock: Clock, base: impl Into<PathBuf>) -> Console {
        Console {
            session,
            clock,
            mode: Mode::Auto,
            base: base.into(),
            waiting: Vec::new(),
        }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    /// Runs one input line and returns the lines to show.
    pub fn line(&mut self, input: &str) -> (Flow, Vec<String>) {
        let input = input.trim();
        let now = self.clock.now();
        if input.is_empty() {
            self.session.paragraph_at(now);
            return (Flow::Continue, vec!["-- new paragraph".into()]);
        }
        if self.waiting.len() == 1 && input.bytes().all(|b| b.is_ascii_digit()) {
            return (Flow::Continue, self.choose(input));
        }
        let Some(cmd) = input.strip_prefix(':') else {
            let r = self.session.submit_at(input, self.mode, now);
            return (Flow::Continue, self.render(&r));
        };
        let (name, arg) = cmd
            .split_once(char::is_whitespace)
            .map_or((cmd, ""), |(n, a)| (n, a.trim()));
        let out = match name {
            "quit" | "q" => return (Flow::Quit, Vec::new()),
            "help" => HELP.lines().map(String::from).collect(),
            "para" => {
                self.session.paragraph_at(now);
                vec!["-- new paragraph".into()]
            }
            "mode" => match arg.parse() {
                Ok(m) => {
                    self.mode = m;
                    vec![format!("-- mode {arg}")]
                }
                Err(e) => vec![format!("! {e}")],
            },
            "choose" => self.choose(arg),
            "tracks" => self.tracks(arg),
            "gen" => match self.session.generate_at(arg, now) {
                Ok(s) => vec![s],
                Err(e) => vec![format!("! {e}")],
            },
            "log" => self
                .session
                .log()
                .iter()
                .map(|e| serde_json::to_string(e).expect("log entries serialize"))
                .collect(),
            other => vec![format!("! unknown command `:{other}` (try :help)")],
        };
        (Flow::Continue, out)
    }

    fn choose(&mut self, arg: &str) -> Vec<String> {
        let nums: Result<Vec<usize>, _> = arg.split_whitespace().map(str::parse).collect();
        let (r, i) = match (nums.as_deref(), self.waiting.as_slice()) {
            (Ok([r, i]), _) => (*r, *i),
            (Ok([i]), [r]) => (*r, *i),
            (Ok([_]), _) => {
                return vec!["! more than one sentence is waiting; use :choose R I".into()]
            }
            _ => return vec!["! usage: :choose R I".into()],
        };
        match self.session.choose_at(r, i, self.clock.now()) {
            Ok(resp) => {
                self.waiting.retain(|w| *w != r);
                self.render(&resp)
            }
            Err(e) => vec![format!("! {e}")],
        }
    }

    fn tracks(&mut self, arg: &str) -> Vec<String> {
        if arg.is_empty() {
            return vec!["! usage: :tracks FILE".into()];
        }
        let path = self.base.join(arg);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                return vec![format!("! cannot read {arg}: file not found")]
            }
            Err(e) => return vec![format!("! cannot read {arg}: {e}")],
        };
        let r = self.session.tracks_at(&text, self.clock.now());
        let mut out = vec![format!("-- ingested {} track records", r.ingested)];
        out.extend(r.rejected.iter().map(|e| format!("  rejected {e}")));
        out
    }

    fn render(&mut self, r: &Response) -> Vec<String> {
        for item in &r.items {
            if let Item::Pending { sentence_ref, .. } = item {
                self.waiting.push(*sentence_ref);
            }
        }
        r.items.iter().flat_map(Item::lines).collect()
    }
}

/// Runs a whole script, echoing each input line before its output.
pub fn transcript(console: &mut Console, script: &str) -> String {
    let mut out = String::new();
    for line in script.lines() {
        if line.starts_with('#') {
            continue;
        }
        out.push_str(format!("» {line}").trim_end());
        out.push('\n');
        let (flow, lines) = console.line(line);
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        if flow == Flow::Quit {
            break;
        }
    }
    out
}

/// First line at which two transcripts differ, 1-based, with both sides.
pub fn first_difference(got: &str, want: &str) -> Option<(usize, String, String)> {
    let (mut g, mut w) = (got.lines(), want.lines());
    let mut n = 0;
    loop {
        n += 1;
        match (g.next(), w.next()) {
            (None, None) => return None,
            (a, b) if a == b => continue,
            (a, b) => {
                return Some((
                    n,
                    a.unwrap_or("<end>").to_string(),
                    b.unwrap_or("<end>").to_string(),
                ))
            }
        }
    }
}

pub fn base_dir(file: &Path) -> PathBuf {
    file.parent().map(Path::to_path_buf).unwrap_or_default()
}

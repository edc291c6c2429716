//! CPU clocks.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClockKind {
    /// CPU time of the measuring thread.
    ThreadCpu,
    /// CPU time (user + system) of a waited-for child process.
    ChildCpu,
    /// Wall clock, used only where no CPU clock is available.
    Wall,
    /// Not a clock: values come from a synthetic evaluator.
    Synthetic,
}

impl ClockKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClockKind::ThreadCpu => "thread-cpu",
            ClockKind::ChildCpu => "child-cpu",
            ClockKind::Wall => "wall",
            ClockKind::Synthetic => "synthetic",
        }
    }
}

#[cfg(unix)]
fn timespec_secs(ts: &libc::timespec) -> f64 {
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

/// Current CPU time of the calling thread, in seconds.
#[cfg(unix)]
pub fn thread_cpu_seconds() -> f64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    assert_eq!(rc, 0, "CLOCK_THREAD_CPUTIME_ID unavailable");
    timespec_secs(&ts)
}

/// Resolution of the thread CPU clock, in seconds.
#[cfg(unix)]
pub fn thread_cpu_resolution() -> f64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec.
    let rc = unsafe { libc::clock_getres(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return 1e-6;
    }
    timespec_secs(&ts).max(1e-9)
}

#[cfg(not(unix))]
pub fn thread_cpu_seconds() -> f64 {
    use std::sync::OnceLock;
    use std::time::Instant;
    static START: OnceLock<Instant> = OnceLock::new();
    START.get_or_init(Instant::now).elapsed().as_secs_f64()
}

#[cfg(not(unix))]
pub fn thread_cpu_resolution() -> f64 {
    1e-6
}

/// Clock used for in-process (builtin) targets.
pub fn in_process_clock() -> ClockKind {
    if cfg!(unix) {
        ClockKind::ThreadCpu
    } else {
        ClockKind::Wall
    }
}

/// Runs `f` and returns its CPU time on the current thread.
pub fn time_cpu<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let start = thread_cpu_seconds();
    let out = f();
    let elapsed = thread_cpu_seconds() - start;
    (out, elapsed.max(0.0))
}

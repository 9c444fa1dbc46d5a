use std::sync::atomic::{AtomicU64, Ordering};

/// Default cap on materialized table entries (2²⁴).
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 24;

static TABLE_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_TABLE_BUDGET);

/// Current cap on the number of entries any single table may hold.
pub fn table_budget() -> u64 {
    TABLE_BUDGET.load(Ordering::Relaxed)
}

/// Overrides the table budget for the whole process.
pub fn set_table_budget(entries: u64) {
    TABLE_BUDGET.store(entries.max(1), Ordering::Relaxed);
}

pub(crate) fn check(entries: u128, what: &str) -> crate::Result<()> {
    let cap = table_budget() as u128;
    if entries > cap {
        return Err(crate::Error::ResourceLimit(format!(
            "{what} needs {entries} table entries, budget is {cap}"
        )));
    }
    Ok(())
}

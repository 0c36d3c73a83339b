import os

ENV_THREADS = "BELLWIT_THREADS"


def worker_count(n_tasks: int) -> int:
    """Number of workers for ``n_tasks`` independent jobs, capped by BELLWIT_THREADS (0 = auto)."""
    raw = os.environ.get(ENV_THREADS, "0").strip() or "0"
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_tasks))

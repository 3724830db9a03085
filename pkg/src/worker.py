import logging
import multiprocessing
import queue
from traceback import format_exc

logger = logging.getLogger(__name__)


class CheckWorker(multiprocessing.Process):
    """Takes (index, payload) jobs off job_queue, posts (index, result, error) to result_queue."""

    def __init__(self, job_queue, result_queue, running_event, target):
        super().__init__()
        self.job_queue = job_queue
        self.result_queue = result_queue
        self.running_event = running_event
        self.target = target

    def run(self):
        logger.debug(f"⭐ Worker {self.name} has started!")
        while self.running_event.is_set():
            try:
                index, payload = self.job_queue.get(timeout=1)
            except queue.Empty:
                continue
            logger.debug(f"🔍 Worker {self.name} got job {index}")
            try:
                self.result_queue.put((index, self.target(*payload), None))
                logger.debug(f"✅ Worker {self.name} finished job {index}")
            except Exception as e:
                logger.error(f"❌ Worker {self.name} failed on job {index}: {e}")
                self.result_queue.put((index, None, format_exc()))
            finally:
                self.job_queue.task_done()
        logger.debug(f"🚯 Worker {self.name} stopping")


def run_workers(job_queue, result_queue, num_workers, running_event, target):
    workers = []
    for _ in range(num_workers):
        worker = CheckWorker(job_queue, result_queue, running_event, target)
        worker.start()
        workers.append(worker)
    return workers


def run_jobs(target, payloads, num_workers, poll=0.5):
    """target(*payload) for every payload, on num_workers processes; results in payload order."""
    if num_workers <= 1 or len(payloads) <= 1:
        return [target(*payload) for payload in payloads]

    job_queue = multiprocessing.JoinableQueue()
    result_queue = multiprocessing.Queue()
    running_event = multiprocessing.Event()
    running_event.set()
    workers = run_workers(job_queue, result_queue, min(num_workers, len(payloads)), running_event, target)
    for index, payload in enumerate(payloads):
        job_queue.put((index, payload))

    results = [None] * len(payloads)
    errors = []
    try:
        received = 0
        while received < len(payloads):
            try:
                index, result, error = result_queue.get(timeout=poll)
            except queue.Empty:
                dead = [w.name for w in workers if not w.is_alive()]
                if dead:
                    pending = len(payloads) - received
                    raise RuntimeError(f"worker(s) {', '.join(dead)} exited with {pending} job(s) pending")
                continue
            received += 1
            if error is not None:
                errors.append(error)
            results[index] = result
        job_queue.join()
    finally:
        running_event.clear()
        for worker in workers:
            worker.join(timeout=5)
            if worker.is_alive():
                worker.terminate()
        logger.debug("✅ All workers have been stopped.")
    if errors:
        raise RuntimeError(f"{len(errors)} job(s) failed:\n{errors[0]}")
    return results

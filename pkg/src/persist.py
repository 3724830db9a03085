import hashlib
import json
import logging
import os

logger = logging.getLogger(__name__)


def fingerprint(spec_echo, check, window, limit, extras=None):
    """Hex digest identifying one check run: same inputs, same key."""
    payload = json.dumps({
        'spec': [list(item) for item in spec_echo],
        'check': check,
        'window': [window.lo, window.hi],
        'limit': limit,
        'extras': {key: str(value) for key, value in sorted((extras or {}).items())},
    }, sort_keys=True)
    return hashlib.md5(payload.encode('utf-8')).hexdigest()


class ReportCache:
    """JSON file mapping run fingerprints to lists of serialized reports."""

    def __init__(self, filepath):
        self.filepath = filepath
        if not os.path.exists(self.filepath):
            directory = os.path.dirname(self.filepath)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self._write_to_file({})

    def _read_from_file(self):
        with open(self.filepath, 'r', encoding='utf-8') as f:
            try:
                return json.load(f)
            except json.JSONDecodeError as e:
                logger.warning(f"⚠️ Report cache {self.filepath} is unreadable ({e}); starting empty")
                return {}

    def _write_to_file(self, data):
        tmpfn = self.filepath + '_'
        with open(tmpfn, 'w', encoding='utf-8') as tempfh:
            json.dump(data, tempfh, indent=2)
            tempfh.flush()
            os.fsync(tempfh.fileno())
        os.replace(tmpfn, self.filepath)

    def __getitem__(self, key):
        return self._read_from_file()[key]

    def __setitem__(self, key, value):
        data = self._read_from_file()
        data[key] = value
        self._write_to_file(data)

    def __delitem__(self, key):
        data = self._read_from_file()
        if key not in data:
            raise KeyError(f"Key '{key}' not found in the report cache.")
        del data[key]
        self._write_to_file(data)

    def __contains__(self, key):
        return key in self._read_from_file()

    def __len__(self):
        return len(self._read_from_file())

    def __iter__(self):
        return iter(self._read_from_file())

    def get(self, key, default=None):
        return self._read_from_file().get(key, default)

    def clear(self):
        self._write_to_file({})

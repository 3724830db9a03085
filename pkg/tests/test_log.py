import logging

from log import ColoredFormatter, setup_logging


def _ours(root):
    return [h for h in root.handlers if getattr(h, '_workbench', False)]


def test_setup_replaces_handlers(tmp_path):
    logfile = tmp_path / 'run.log'
    root = setup_logging(logging.INFO, str(logfile))
    assert len(_ours(root)) == 2
    root = setup_logging(logging.DEBUG)
    assert len(_ours(root)) == 1
    assert root.level == logging.DEBUG


def test_file_handler_is_plain(tmp_path):
    logfile = tmp_path / 'run.log'
    setup_logging(logging.INFO, str(logfile))
    logging.getLogger('workbench.test').warning('check finished')
    for handler in _ours(logging.getLogger()):
        handler.flush()
    text = logfile.read_text(encoding='utf-8')
    assert 'WARNING - check finished' in text
    assert '\x1b[' not in text
    setup_logging(logging.INFO)


def test_colored_formatter():
    record = logging.LogRecord('x', logging.ERROR, __file__, 1, 'boom', None, None)
    text = ColoredFormatter('%(message)s').format(record)
    assert 'boom' in text
    assert text.endswith('\x1b[0m')

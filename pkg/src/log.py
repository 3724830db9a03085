import logging
import colorama

colorama.init()

FILE_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
CONSOLE_FORMAT = '%(levelname)s %(name)s: %(message)s'


class ColoredFormatter(logging.Formatter):
    COLORS = {
        'DEBUG': colorama.Fore.CYAN + colorama.Back.BLACK,
        'INFO': colorama.Fore.GREEN + colorama.Back.BLACK,
        'WARNING': colorama.Fore.YELLOW + colorama.Back.BLACK,
        'ERROR': colorama.Fore.RED + colorama.Back.BLACK,
        'CRITICAL': colorama.Fore.WHITE + colorama.Back.RED,
    }

    def format(self, record):
        level_color = self.COLORS.get(record.levelname, colorama.Fore.WHITE)
        msg = super().format(record)
        return f"{level_color}{msg}{colorama.Style.RESET_ALL}"


def setup_logging(level=logging.INFO, logfile=None):
    """Install the colored console handler (stderr) and an optional plain file handler
    on the root logger. Calling it twice replaces the previous handlers."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, '_workbench', False):
            root.removeHandler(handler)
            handler.close()

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(ColoredFormatter(CONSOLE_FORMAT))
    console_handler._workbench = True
    root.addHandler(console_handler)

    if logfile:
        file_handler = logging.FileHandler(logfile)
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
        file_handler._workbench = True
        root.addHandler(file_handler)

    root.setLevel(level)
    return root

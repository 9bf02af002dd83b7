""" Structured logs: the data model shared by all analyses """

from .model import TemplateId, LogEntry, Log, LogSet
from .transform import reverse, reverse_all, remove_messages_of
from .io import LogFormat, load_log_set, load_log, write_log_set

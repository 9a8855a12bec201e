import logging
log = logging.getLogger(__name__)

import dataclasses
import io
import json
import numbers
from pathlib import Path

import pandas as pd

from .exceptions import InvalidArgumentError


@dataclasses.dataclass
class OutputEnvelope:
    '''
    Machine-readable result of one command

    Attributes
    ----------
    command : str
        Name of the command that produced the rows.
    parameters : dict
        Arguments that determine the rows. Options affecting only runtime
        (such as the number of jobs) are not included.
    rows : list of dict
        Records with a fixed schema per command.
    version : str
        Package version.
    elapsed_ms : int
        Wall time, or 0 when timing was not requested.
    '''
    command: str
    parameters: dict
    rows: list
    version: str
    elapsed_ms: int = 0

    def as_dict(self):
        return {
            'command': self.command,
            'version': self.version,
            'parameters': self.parameters,
            'elapsed_ms': self.elapsed_ms,
            'rows': self.rows,
        }


def _flatten(value):
    if isinstance(value, (list, tuple)):
        return ';'.join(str(v) for v in value)
    if isinstance(value, dict):
        raise InvalidArgumentError('Nested records cannot be written as a table')
    return value


class BaseWriter:

    def __init__(self, columns=None, grouped=False):
        self.columns = columns
        self.grouped = grouped

    def _frame(self, rows):
        flat = [{k: _flatten(v) for k, v in row.items()} for row in rows]
        return pd.DataFrame(flat, columns=self.columns)

    def format(self, envelope):
        raise NotImplementedError

    def write(self, envelope, path=None):
        text = self.format(envelope)
        if path is None:
            return text
        path = Path(path)
        with path.open('w', encoding='utf-8', newline='') as fh:
            fh.write(text)
        log.info('Wrote %d rows to %s', len(envelope.rows), path)
        return text


class JSONWriter(BaseWriter):

    def format(self, envelope):
        return json.dumps(envelope.as_dict(), indent=2, ensure_ascii=False) + '\n'


class CSVWriter(BaseWriter):

    def format(self, envelope):
        stream = io.StringIO()
        self._frame(envelope.rows).to_csv(stream, index=False, lineterminator='\r\n')
        return stream.getvalue()


class TableWriter(BaseWriter):

    def format(self, envelope):
        df = self._frame(envelope.rows)
        if df.empty:
            return f'{envelope.command}: no rows\n'
        formatters = None
        if self.grouped:
            formatters = {c: _group_digits for c in df.columns}
        return df.to_string(index=False, formatters=formatters) + '\n'


def _group_digits(value):
    if isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return f'{int(value):,}'
    return str(value)


WRITERS = {
    'json': JSONWriter,
    'csv': CSVWriter,
    'table': TableWriter,
}


def get_writer(fmt, columns=None, grouped=False):
    try:
        klass = WRITERS[fmt]
    except KeyError:
        options = ', '.join(WRITERS)
        raise InvalidArgumentError(f'Unknown format {fmt}. Options are {options}.')
    return klass(columns=columns, grouped=grouped)


def load_records(path):
    '''
    Read records from a JSON file

    The file may hold a single record, a list of records or an envelope
    with a `rows` key.
    '''
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except (OSError, ValueError) as e:
        raise InvalidArgumentError(f'Cannot read {path}: {e}')
    if isinstance(data, dict) and 'rows' in data:
        data = data['rows']
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise InvalidArgumentError(f'{path} does not contain records')
    return data

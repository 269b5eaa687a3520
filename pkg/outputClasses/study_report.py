from convergenceClasses.convergence_study import StudyResult
from outputClasses.snapshot_writer import fmt
from pathlib import Path
import numpy as np
import csv


class StudyReportWriter():
    """
    study.csv         one row per consecutive-level difference, joint norms and their log2
    study_fields.csv  the same split into displacement and velocity norms
    rates.csv         fitted rate per field and norm
    """

    FIELDS = ('joint', 'displacement', 'velocity')

    def __init__(self, directory):
        self._directory = Path(directory)
        self._directory.mkdir(parents=True, exist_ok=True)

    @property
    def directory(self):
        return self._directory

    @classmethod
    def log2(cls, value:float) -> str:
        return fmt(np.log2(value)) if value > 0 else ''

    def write(self, result:StudyResult) -> dict:
        return {'study': self.write_study(result),
                'fields': self.write_fields(result),
                'rates': self.write_rates(result)}

    def write_study(self, result:StudyResult) -> Path:
        norms = result.spec.norms
        path = self._directory / 'study.csv'
        with open(path, 'w', newline='') as output_file:
            writer = csv.writer(output_file)
            writer.writerow(['level', 'n_nodes', 'tau', *norms, *(f"log2_{which}" for which in norms)])
            for row in result.rows:
                writer.writerow([row.level, row.n_nodes, fmt(row.tau),
                                 *(fmt(row.norms[which]) for which in norms),
                                 *(self.log2(row.norms[which]) for which in norms)])
        return path

    def write_fields(self, result:StudyResult) -> Path:
        norms = result.spec.norms
        path = self._directory / 'study_fields.csv'
        with open(path, 'w', newline='') as output_file:
            writer = csv.writer(output_file)
            writer.writerow(['level', 'field', *norms])
            for row in result.rows:
                for field, values in (('displacement', row.displacement_norms), ('velocity', row.velocity_norms)):
                    writer.writerow([row.level, field, *(fmt(values[which]) for which in norms)])
        return path

    def write_rates(self, result:StudyResult) -> Path:
        path = self._directory / 'rates.csv'
        with open(path, 'w', newline='') as output_file:
            writer = csv.writer(output_file)
            writer.writerow(['field', 'norm', 'rate'])
            for field, rates in zip(StudyReportWriter.FIELDS,
                                    (result.rates, result.displacement_rates, result.velocity_rates)):
                for which in result.spec.norms:
                    rate = rates[which]
                    writer.writerow([field, which, '' if rate is None else fmt(rate)])
        return path

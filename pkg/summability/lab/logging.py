import logging

from logzio.handler import LogzioHandler


LOGGER_NAME = 'summability.lab'

_LOGGING_HANDLER = None


class ExperimentLogHandler(LogzioHandler):
    def __init__(self, *args, **kwargs):
        self.default_extra_fields = kwargs.pop('default_extra_fields')
        super().__init__(*args, **kwargs)

    def extra_fields(self, message):
        extra_fields = super().extra_fields(message)
        extra_fields.update(self.default_extra_fields)
        return extra_fields


class ExperimentLogger:
    def __init__(self, logger, level=logging.INFO):
        self.logger = logger
        self.level = level

    def log_experiment(self, spec):
        lines = [
            '--- Experiment ---',
            f'{spec.id}: {spec.theorem} ({spec.variant}, refinement {spec.refinement})',
            f'function: {spec.function.id} {spec.function.params or ""}',
            f'matrix: {spec.matrix.id} {spec.matrix.params or ""}',
        ]
        if spec.model is not None:
            lines.append(f'model: {spec.model.id} {spec.model.params or ""}')
        lines.append(f'space: {spec.space.label}, r={spec.r}')
        lines.append(f'n: {", ".join(str(n) for n in spec.n_values)}')
        lines.append('')
        self.logger.log(self.level, '\n'.join(lines))

    def log_report(self, report):
        lines = [
            '--- Report ---',
            f'{report.experiment_id}: slope {report.fitted_slope!r}, '
            f'bound slope {report.bound_slope!r}, '
            f'constant ratio max {report.constant_ratio_max!r}',
        ]
        for row in report.rows:
            lines.append(
                f'n={row.n} deviation={row.deviation!r} bound={row.bound_value!r} '
                f'ratio={row.ratio!r}',
            )
        for hypothesis in report.hypotheses:
            status = 'ok' if hypothesis.ok else 'FAILED'
            lines.append(f'({hypothesis.condition}) {status} K={hypothesis.constant!r}')
        for item in report.items:
            lines.append(f'{item.level}: {item.message}')
        lines.append('')
        self.logger.log(self.level, '\n'.join(lines))


def get_logger(settings=None, context=None):
    """
    Returns a `LoggerAdapter` over the `summability.lab` logger carrying
    `context` (experiment id, theorem, matrix). When `settings.logging`
    names a Logz.io token the remote handler is attached once per process.
    """
    global _LOGGING_HANDLER

    logger = logging.getLogger(LOGGER_NAME)
    options = settings.logging if settings is not None else None
    if options is not None:
        if _LOGGING_HANDLER is None and options.logzio_token is not None:
            kwargs = {'url': options.logzio_url} if options.logzio_url else {}
            _LOGGING_HANDLER = ExperimentLogHandler(
                options.logzio_token,
                default_extra_fields=options.extra_fields,
                **kwargs,
            )
            logger.addHandler(_LOGGING_HANDLER)
        logger.setLevel(getattr(logging, options.level))
    return logging.LoggerAdapter(logger, context or {})

"""
Главный модуль для запуска ybx из командной строки.

Этот модуль:
- Загружает конфигурацию из переменных окружения и .env файла
- Настраивает базовое логирование (stderr и файл журнала)
- Передает аргументы в CLI и возвращает его код завершения
- Обрабатывает прерывание и непредвиденные исключения
"""

import logging
import sys
import traceback

from dotenv import load_dotenv

from src.cli import EXIT_FAILED, EXIT_USAGE, cli_main
from src.config import Config
from src.factory import ToolkitFactory


def main(argv=None):
    """
    Точка входа ybx.

    Выполняет следующие шаги:
    1. Загружает переменные окружения
    2. Настраивает базовое логирование модулей вычислений
    3. Проверяет конфигурацию и создает логгер через фабрику
    4. Выполняет подкоманду и завершает процесс с ее кодом
    """
    logger = None

    try:
        # Загружаем переменные окружения из .env файла
        load_dotenv()
        config = Config()

        # Сообщения модулей вычислений идут в stderr, stdout занят отчетом
        logging.basicConfig(
            level=getattr(logging, config.log_level, logging.INFO),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=[logging.StreamHandler(sys.stderr)]
        )
        logger = logging.getLogger(__name__)

        ok, problems = config.validate()
        if not ok:
            for problem in problems:
                logger.error(f"Ошибка в конфигурации: {problem}")
            sys.exit(EXIT_USAGE)

        toolkit_logger = ToolkitFactory.create_logger(config)
        status = cli_main(argv, config=config, logger=toolkit_logger)
        toolkit_logger.flush()
        sys.exit(status)

    except KeyboardInterrupt:
        if logger:
            logger.info("Выполнение прервано пользователем")
        sys.exit(130)
    except SystemExit:
        raise
    except Exception as e:
        if logger:
            logger.error(f"Критическая ошибка: {e}")
            logger.error(traceback.format_exc())
        else:
            print(f"Критическая ошибка: {e}", file=sys.stderr)
            print(traceback.format_exc(), file=sys.stderr)
        sys.exit(EXIT_FAILED)


if __name__ == "__main__":
    main()

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

try:
    from config import Config
except ValueError as e:
    print(f"Ошибка конфигурации: {e}", file=sys.stderr)
    sys.exit(2)

from algebra.errors import CacheMismatchError, DeltaError, FieldConfigurationError
from cache import graph_storage
from commands import COMMANDS
from services import Construction

# Настройка логирования
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler(Config.LOG_FILE, encoding='utf-8'),
        logging.StreamHandler()
    ]
)
logger = logging.getLogger("delta_amalgam")

EXIT_OK = 0
EXIT_CLAIM_FAILURE = 1
EXIT_CONFIGURATION = 2
EXIT_CACHE_MISMATCH = 3


def modulus_literal(raw: str) -> int:
    try:
        return int(raw, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer literal: {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modulus", type=modulus_literal, default=None,
                        help="primitive degree-6 polynomial over GF(2) as a bitmask, e.g. 0b1011011")
    common.add_argument("--threads", type=int, default=None, help="worker cap for batched canonicalisation")
    common.add_argument("--json", action="store_true", help="print only JSON on stdout")
    common.add_argument("--no-cache", action="store_true", help="ignore the graph cache and rebuild")

    parser = argparse.ArgumentParser(
        prog="delta-amalgam",
        description="Coset graph of PSU3(8) extensions: build, verify, export",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.add_parser(subparsers, common)
    return parser


class DeltaToolkit:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.modulus = args.modulus if args.modulus is not None else Config.MODULUS
        self.threads = args.threads if args.threads is not None else Config.THREADS
        self.use_cache = not args.no_cache
        self._construction: Optional[Construction] = None

        if self.threads < 1:
            raise ValueError("--threads must be at least 1")

    def construction(self) -> Construction:
        """Общий объект сборки для текущей команды"""
        if self._construction is None:
            self._construction = Construction(
                self.modulus,
                storage=graph_storage,
                threads=self.threads,
                use_cache=self.use_cache,
                seed=Config.SEED,
                sample_size=Config.SAMPLE_SIZE,
            )
            # неверный модуль падает здесь, до вычислений в группе
            self._construction.field
        return self._construction

    def emit(self, text: str, payload: dict) -> None:
        if self.args.json:
            print(json.dumps(payload, ensure_ascii=False, indent=2, default=str))
        else:
            print(text)

    def run(self) -> int:
        """Запуск команды с отображением ошибок в коды выхода"""
        logger.info(f"{self.args.command}: modulus {self.modulus:#b}, threads {self.threads}")
        try:
            return self.args.handler(self, self.args)
        except CacheMismatchError as e:
            logger.error(f"Несовпадение кэша: {e}")
            return EXIT_CACHE_MISMATCH
        except (FieldConfigurationError, ValueError) as e:
            logger.error(f"Ошибка конфигурации: {e}")
            return EXIT_CONFIGURATION
        except DeltaError as e:
            logger.error(f"Проверка не пройдена: {e}")
            return EXIT_CLAIM_FAILURE
        except OSError as e:
            logger.error(f"Ошибка ввода-вывода: {e}")
            return EXIT_CLAIM_FAILURE


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        toolkit = DeltaToolkit(args)
    except ValueError as e:
        logger.error(f"Ошибка конфигурации: {e}")
        return EXIT_CONFIGURATION
    return toolkit.run()


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("Остановлено пользователем")
        sys.exit(130)

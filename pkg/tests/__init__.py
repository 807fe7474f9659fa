
# Этот файл нужен для того, чтобы директория tests считалась пакетом Python
